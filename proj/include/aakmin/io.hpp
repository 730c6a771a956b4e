#pragma once

#include <string>

#include "aakmin/aak.hpp"

namespace aakmin {

// On-disk automaton document (JSON).  Schema:
//   { "alphabet_size": 1, "states": n,
//     "alpha": [...], "matrix": [[...], ...], "beta": [...],
//     "name": "optional" }
struct WfaDocument {
    Wfa wfa;
    std::string name;
};

// Companion record written by `approximate` and `verify`: the input's
// summary, the certified error, the approximant and every oracle residual
// from the same run.
struct ReportDocument {
    int input_states = 0;
    double input_spectral_radius = 0;
    VectorXd singular_numbers;
    int k = 0;
    double sigma_k = 0;
    Wfa approximant;
    ApproxDiagnostics diagnostics;
    bool degenerate = false;
    std::string recommendation;
    double millis = 0;
};

WfaDocument parse_wfa(const std::string& text);
WfaDocument load_wfa(const std::string& path);

// Numbers are printed with 17 significant digits so parse -> emit -> parse
// reproduces every double exactly.
std::string emit_wfa(const Wfa& w, const std::string& name = "");
std::string emit_report(const ReportDocument& rep);

} // namespace aakmin
