#pragma once

#include <stdexcept>
#include <string>

namespace aakmin {

// Which layer of the pipeline detected the problem.  The CLI maps each stage
// to its own exit code so scripts can tell a bad document from a numerical
// failure.
enum class Stage {
    Document,
    Core,
    Linalg,
    Sva,
    Aak,
    Oracle,
};

inline const char* stage_name(Stage s)
{
    switch (s) {
    case Stage::Document: return "document";
    case Stage::Core: return "core";
    case Stage::Linalg: return "linalg";
    case Stage::Sva: return "sva";
    case Stage::Aak: return "aak";
    case Stage::Oracle: return "oracle";
    }
    return "unknown";
}

class StageError : public std::runtime_error {
public:
    StageError(Stage stage, const std::string& what)
        : std::runtime_error(what), stage_(stage)
    {
    }

    Stage stage() const { return stage_; }

private:
    Stage stage_;
};

[[noreturn]] inline void fail(Stage stage, const std::string& msg)
{
    throw StageError(stage, msg);
}

} // namespace aakmin
