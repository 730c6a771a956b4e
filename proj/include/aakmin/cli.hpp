#pragma once

namespace aakmin {

// Entry point of the command line tool.  Exit codes: 0 success (all
// thresholds passed where applicable), 1 threshold failure, 2 usage error,
// 3..8 stage errors (document, core, linalg, sva, aak, oracle).
int run_command(int argc, const char* const* argv);

} // namespace aakmin
