#include "aakmin/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aakmin/ensemble.hpp"
#include "aakmin/io.hpp"
#include "aakmin/oracle.hpp"

namespace aakmin {

namespace {

int stage_exit_code(Stage s)
{
    switch (s) {
    case Stage::Document: return 3;
    case Stage::Core: return 4;
    case Stage::Linalg: return 5;
    case Stage::Sva: return 6;
    case Stage::Aak: return 7;
    case Stage::Oracle: return 8;
    }
    return 9;
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_out(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        fail(Stage::Document, "cannot write '" + path + "'");
    f << text;
}

struct Thresholds {
    bool ok = true;
    std::string lines;

    void check(const std::string& name, bool pass, const std::string& detail)
    {
        ok = ok && pass;
        lines += std::string(pass ? "  [ok]   " : "  [FAIL] ") + name + ": " +
                 detail + "\n";
    }
};

// optimality thresholds shared by `verify` and `bench`
void optimality_checks(Thresholds& th, double sigma_k,
                       const ApproxDiagnostics& d)
{
    const double scale = d.allpass_scale;
    th.check("allpass", d.allpass_r1 <= 1e-7 * scale &&
                            d.allpass_r2 <= 1e-7 * scale &&
                            d.allpass_r3 <= 1e-7 * scale,
             num(d.allpass_r1) + " " + num(d.allpass_r2) + " " +
                 num(d.allpass_r3) + " vs " + num(1e-7 * scale));
    th.check("unimodularity", d.unimodularity <= 1e-7, num(d.unimodularity));
    th.check("hankel error = sigma_k",
             std::abs(d.hankel_error - sigma_k) <= 1e-7 * sigma_k,
             num(d.hankel_error) + " vs " + num(sigma_k));
    th.check("section error in band",
             d.section_error >= sigma_k - 1e-5 &&
                 d.section_error <= sigma_k + 1e-8,
             num(d.section_error) + " vs " + num(sigma_k));
    th.check("l2 bound", d.l2 + d.l2_tail <= sigma_k + 1e-8,
             num(d.l2 + d.l2_tail) + " <= " + num(sigma_k));
}

int cmd_info(const std::string& file)
{
    WfaDocument doc = load_wfa(file);
    Wfa minimal = minimize(doc.wfa);
    SvaModel sva = to_sva(minimal);
    if (!doc.name.empty())
        std::cout << "name: " << doc.name << "\n";
    std::cout << "states: " << doc.wfa.states() << "\n";
    std::cout << "minimal states: " << minimal.states() << "\n";
    std::cout << "spectral radius: " << num(spectral_radius(doc.wfa)) << "\n";
    std::cout << "singular numbers:";
    for (int i = 0; i < sva.singular_numbers.size(); ++i)
        std::cout << " " << num(sva.singular_numbers(i));
    std::cout << "\n";
    return 0;
}

int cmd_eval(const std::string& file, long t)
{
    WfaDocument doc = load_wfa(file);
    std::cout << num(evaluate(doc.wfa, t)) << "\n";
    return 0;
}

int cmd_minimize(const std::string& file, double tol, const std::string& out)
{
    WfaDocument doc = load_wfa(file);
    MinimizeResult res = minimize_with_diagnostics(doc.wfa, tol);
    if (!res.warning.empty())
        std::cerr << "warning: " << res.warning << "\n";
    write_out(emit_wfa(res.wfa, doc.name), out);
    return 0;
}

int cmd_sva(const std::string& file, double tol, const std::string& out)
{
    WfaDocument doc = load_wfa(file);
    SvaModel sva = to_sva(minimize(doc.wfa, tol));
    write_out(emit_wfa(sva.wfa, doc.name), out);
    std::cerr << "singular numbers:";
    for (int i = 0; i < sva.singular_numbers.size(); ++i)
        std::cerr << " " << num(sva.singular_numbers(i));
    std::cerr << "\n";
    return 0;
}

std::string report_text(const ReportDocument& rep)
{
    std::string out;
    out += "input states:        " + std::to_string(rep.input_states) + "\n";
    out += "target rank:         " + std::to_string(rep.k) + "\n";
    out += "certified error:     " + num(rep.sigma_k) + "\n";
    out += "hankel error:        " + num(rep.diagnostics.hankel_error) + "\n";
    out += "section error (N=" + std::to_string(rep.diagnostics.section_size) +
           "): " + num(rep.diagnostics.section_error) + "\n";
    out += "l2 error:            " + num(rep.diagnostics.l2) + " (+tail " +
           num(rep.diagnostics.l2_tail) + ")\n";
    out += "allpass residuals:   " + num(rep.diagnostics.allpass_r1) + " " +
           num(rep.diagnostics.allpass_r2) + " " +
           num(rep.diagnostics.allpass_r3) + " (scale " +
           num(rep.diagnostics.allpass_scale) + ")\n";
    out += "unimodularity:       " + num(rep.diagnostics.unimodularity) + "\n";
    out += "degenerate:          " +
           std::string(rep.degenerate ? "yes" : "no") + "\n";
    if (!rep.recommendation.empty())
        out += "recommendation:      " + rep.recommendation + "\n";
    out += "time:                " + num(rep.millis) + " ms\n";
    return out;
}

ReportDocument build_report(const Wfa& input, int k,
                            const ApproximationReport& rep, double millis)
{
    ReportDocument doc;
    doc.input_states = input.states();
    doc.input_spectral_radius = spectral_radius(input);
    doc.singular_numbers = rep.singular_numbers;
    doc.k = k;
    doc.sigma_k = rep.sigma_k;
    doc.approximant = rep.approximant;
    doc.diagnostics = rep.diagnostics;
    doc.degenerate = rep.degenerate;
    doc.recommendation = rep.recommendation;
    doc.millis = millis;
    return doc;
}

int cmd_approximate(const std::string& file, int k, int section, double tol,
                    const std::string& report_path, const std::string& format,
                    const std::string& out)
{
    WfaDocument doc = load_wfa(file);
    AakOptions opts;
    opts.minimize_tol = tol;
    opts.section_size = section;

    const auto t0 = std::chrono::steady_clock::now();
    ApproximationReport rep = aak_approximation(doc.wfa, k, opts);
    const double millis =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    if (!rep.minimize_warning.empty())
        std::cerr << "warning: " << rep.minimize_warning << "\n";

    ReportDocument rd = build_report(doc.wfa, k, rep, millis);
    const std::string report_str =
        format == "text" ? report_text(rd) : emit_report(rd);
    if (report_path.empty()) {
        write_out(report_str, out);
    } else {
        write_out(emit_wfa(rep.approximant, doc.name), out);
        write_out(report_str, report_path);
    }
    return 0;
}

int cmd_verify(const std::string& file_a, const std::string& file_b,
               int section, const std::string& format)
{
    WfaDocument da = load_wfa(file_a);
    WfaDocument db = load_wfa(file_b);

    const auto t0 = std::chrono::steady_clock::now();
    Wfa min_a = minimize(da.wfa);
    const int n = min_a.states();
    const int k = minimize(db.wfa).states();

    ApproxDiagnostics d;
    d.section_size = section;
    d.section_error = section_spectral_error(da.wfa, db.wfa, section);
    L2Result l2 = l2_error(da.wfa, db.wfa, 512);
    d.l2 = l2.partial;
    d.l2_tail = l2.tail_bound;
    d.hankel_error = exact_hankel_norm(difference(da.wfa, db.wfa).combined);

    Thresholds th;
    double sigma_k = 0;
    VectorXd singular;
    bool degenerate = false;
    if (k >= 1 && k < n) {
        // re-derive the certificate for rank k from the input alone
        SvaModel sva = to_sva(min_a);
        singular = sva.singular_numbers;
        sigma_k = sva.singular_numbers(k);
        PartitionedSva part = partition(sva, k);
        AuxiliaryWfa aux = solve_auxiliary(part);
        degenerate = aux.degenerate;
        AllpassResidual ap = allpass_verify(part, aux);
        d.allpass_r1 = ap.r1;
        d.allpass_r2 = ap.r2;
        d.allpass_r3 = ap.r3;
        d.allpass_scale = ap.scale;
        UnimodResult um = unimodularity_residual(sva, k);
        d.unimodularity = um.max_deviation;
        d.unimod_skipped = um.skipped;
        optimality_checks(th, sigma_k, d);
    } else {
        SvaModel sva = to_sva(min_a);
        singular = sva.singular_numbers;
        th.check("functions agree",
                 d.hankel_error <=
                     1e-8 * std::max(1.0, sva.singular_numbers(0)),
                 num(d.hankel_error));
    }
    const double millis =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();

    ReportDocument rd;
    rd.input_states = da.wfa.states();
    rd.input_spectral_radius = spectral_radius(da.wfa);
    rd.singular_numbers = singular;
    rd.k = k;
    rd.sigma_k = sigma_k;
    rd.approximant = db.wfa;
    rd.diagnostics = d;
    rd.degenerate = degenerate;
    rd.millis = millis;

    if (format == "text") {
        std::cout << report_text(rd);
        std::cout << "checks:\n" << th.lines;
    } else {
        std::cout << emit_report(rd);
        std::cerr << th.lines;
    }
    return th.ok ? 0 : 1;
}

int cmd_bench(int seeds, int max_states, double rho_cap, int section,
              const std::string& out)
{
    EnsembleSpec spec;
    spec.max_states = max_states;
    spec.rho_cap = rho_cap;

    std::string csv =
        "seed,n,k,sigma_k,aak_section_error,sva_trunc_error,allpass_r1,"
        "allpass_r2,allpass_r3,unimod_residual,l2_error,degenerate,millis\n";
    bool all_ok = true;
    for (int seed = 1; seed <= seeds; ++seed) {
        EnsembleInstance inst = random_instance(seed, spec);
        AakOptions opts;
        opts.section_size = section;

        const auto t0 = std::chrono::steady_clock::now();
        ApproximationReport rep = aak_approximation(inst.wfa, inst.k, opts);
        const double millis =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();

        // baseline: keep the k leading balanced states
        SvaModel sva = to_sva(minimize(inst.wfa));
        Wfa trunc;
        trunc.alpha = sva.wfa.alpha.head(inst.k);
        trunc.beta = sva.wfa.beta.head(inst.k);
        trunc.trans = sva.wfa.trans.topLeftCorner(inst.k, inst.k);
        const double sva_err =
            section_spectral_error(inst.wfa, trunc, section);

        Thresholds th;
        optimality_checks(th, rep.sigma_k, rep.diagnostics);
        th.check("beats balanced truncation",
                 rep.diagnostics.section_error <= sva_err + 1e-8,
                 num(rep.diagnostics.section_error) + " vs " + num(sva_err));
        if (!th.ok) {
            all_ok = false;
            std::cerr << "seed " << seed << ":\n" << th.lines;
        }

        csv += std::to_string(seed) + "," + std::to_string(inst.wfa.states()) +
               "," + std::to_string(inst.k) + "," + num(rep.sigma_k) + "," +
               num(rep.diagnostics.section_error) + "," + num(sva_err) + "," +
               num(rep.diagnostics.allpass_r1) + "," +
               num(rep.diagnostics.allpass_r2) + "," +
               num(rep.diagnostics.allpass_r3) + "," +
               num(rep.diagnostics.unimodularity) + "," +
               num(rep.diagnostics.l2) + "," +
               (rep.degenerate ? "1" : "0") + "," + num(millis) + "\n";
    }
    write_out(csv, out);
    std::cerr << (all_ok ? "all seeds passed\n" : "threshold failures\n");
    return all_ok ? 0 : 1;
}

} // namespace

int run_command(int argc, const char* const* argv)
{
    CLI::App app{"optimal spectral-norm approximation of weighted automata"};
    app.require_subcommand(1);

    std::string file, file_b, out, report_path, format = "json";
    long eval_t = 0;
    int k = 0, section = 256, seeds = 20, max_states = 6;
    double tol = 1e-9, rho_cap = 0.9;

    auto* info = app.add_subcommand("info", "summarize an automaton");
    info->add_option("file", file, "automaton document")->required();

    auto* eval = app.add_subcommand("eval", "evaluate f(t)");
    eval->add_option("file", file)->required();
    eval->add_option("t", eval_t, "index")->required();

    auto* mini = app.add_subcommand("minimize", "emit a minimal automaton");
    mini->add_option("file", file)->required();
    mini->add_option("--tolerance", tol, "rank cut, relative");
    mini->add_option("-o,--output", out, "write here instead of stdout");

    auto* svac = app.add_subcommand("sva", "emit the balanced form");
    svac->add_option("file", file)->required();
    svac->add_option("--tolerance", tol);
    svac->add_option("-o,--output", out);

    auto* approx = app.add_subcommand(
        "approximate", "optimal spectral-norm rank-k approximation");
    approx->add_option("file", file)->required();
    approx->add_option("-k,--states", k, "target rank")->required();
    approx->add_option("-N,--truncation", section, "verification section");
    approx->add_option("--tolerance", tol);
    approx->add_option("--report", report_path, "write the report here");
    approx->add_option("--format", format)
        ->check(CLI::IsMember({"json", "text"}));
    approx->add_option("-o,--output", out);

    auto* verify = app.add_subcommand("verify", "check an approximation pair");
    verify->add_option("file", file)->required();
    verify->add_option("approximant", file_b)->required();
    verify->add_option("-N,--truncation", section);
    verify->add_option("--format", format)
        ->check(CLI::IsMember({"json", "text"}));

    auto* bench = app.add_subcommand("bench", "random-ensemble benchmark");
    bench->add_option("--seeds", seeds, "number of seeds");
    bench->add_option("--max-states", max_states);
    bench->add_option("--rho-cap", rho_cap);
    bench->add_option("-N,--truncation", section);
    bench->add_option("-o,--output", out, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (info->parsed())
            return cmd_info(file);
        if (eval->parsed())
            return cmd_eval(file, eval_t);
        if (mini->parsed())
            return cmd_minimize(file, tol, out);
        if (svac->parsed())
            return cmd_sva(file, tol, out);
        if (approx->parsed())
            return cmd_approximate(file, k, section, tol, report_path, format,
                                   out);
        if (verify->parsed())
            return cmd_verify(file, file_b, section, format);
        if (bench->parsed())
            return cmd_bench(seeds, max_states, rho_cap, section, out);
    } catch (const StageError& e) {
        std::cerr << "error [" << stage_name(e.stage()) << "]: " << e.what()
                  << "\n";
        return stage_exit_code(e.stage());
    }
    return 2;
}

} // namespace aakmin
