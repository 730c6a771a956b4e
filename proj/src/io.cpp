#include "aakmin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aakmin {

namespace {

using nlohmann::json;

double require_finite(const json& j, const std::string& where)
{
    if (!j.is_number())
        fail(Stage::Document, "field '" + where + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail(Stage::Document, "field '" + where + "' is not finite");
    return v;
}

const json& require(const json& doc, const char* key)
{
    auto it = doc.find(key);
    if (it == doc.end())
        fail(Stage::Document, std::string("missing field '") + key + "'");
    return *it;
}

VectorXd parse_vector(const json& j, const std::string& name, int n)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        fail(Stage::Document, "field '" + name + "' must be an array of " +
                                  std::to_string(n) + " numbers");
    VectorXd v(n);
    for (int i = 0; i < n; ++i)
        v(i) = require_finite(j[i], name + "[" + std::to_string(i) + "]");
    return v;
}

// 17 significant digits: enough to reproduce any double exactly
std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string vec(const VectorXd& v)
{
    std::string out = "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += num(v(i));
    }
    return out + "]";
}

std::string mat(const MatrixXd& m, const char* indent)
{
    std::string out = "[";
    for (int i = 0; i < m.rows(); ++i) {
        if (i)
            out += ",";
        out += std::string("\n") + indent + vec(m.row(i).transpose());
    }
    return out + "\n" + std::string(indent).substr(2) + "]";
}

} // namespace

WfaDocument parse_wfa(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        // parse_error for bad syntax, out_of_range for literals like 1e999
        fail(Stage::Document, std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object())
        fail(Stage::Document, "document root must be an object");

    const json& ab = require(doc, "alphabet_size");
    if (!ab.is_number_integer() || ab.get<long>() != 1)
        fail(Stage::Document,
             "only one-letter alphabets are supported (alphabet_size must "
             "be 1)");

    const json& js = require(doc, "states");
    if (!js.is_number_integer() || js.get<long>() < 1)
        fail(Stage::Document, "field 'states' must be a positive integer");
    const int n = js.get<int>();

    WfaDocument out;
    out.wfa.alpha = parse_vector(require(doc, "alpha"), "alpha", n);
    out.wfa.beta = parse_vector(require(doc, "beta"), "beta", n);

    const json& jm = require(doc, "matrix");
    if (!jm.is_array() || static_cast<int>(jm.size()) != n)
        fail(Stage::Document, "field 'matrix' must be an array of " +
                                  std::to_string(n) + " rows");
    out.wfa.trans.resize(n, n);
    for (int i = 0; i < n; ++i)
        out.wfa.trans.row(i) =
            parse_vector(jm[i], "matrix[" + std::to_string(i) + "]", n)
                .transpose();

    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            fail(Stage::Document, "field 'name' must be a string");
        out.name = doc["name"].get<std::string>();
    }
    validate(out.wfa);
    return out;
}

WfaDocument load_wfa(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(Stage::Document, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_wfa(ss.str());
}

std::string emit_wfa(const Wfa& w, const std::string& name)
{
    std::string out = "{\n";
    out += "  \"alphabet_size\": 1,\n";
    out += "  \"states\": " + std::to_string(w.states()) + ",\n";
    if (!name.empty())
        out += "  \"name\": " + json(name).dump() + ",\n";
    out += "  \"alpha\": " + vec(w.alpha) + ",\n";
    out += "  \"matrix\": " + mat(w.trans, "    ") + ",\n";
    out += "  \"beta\": " + vec(w.beta) + "\n";
    return out + "}\n";
}

std::string emit_report(const ReportDocument& rep)
{
    std::string a = emit_wfa(rep.approximant);
    // indent the nested document
    std::string nested;
    for (char c : a) {
        nested += c;
        if (c == '\n')
            nested += "  ";
    }
    while (!nested.empty() &&
           (nested.back() == ' ' || nested.back() == '\n'))
        nested.pop_back();

    std::string out = "{\n";
    out += "  \"input\": {\n";
    out += "    \"states\": " + std::to_string(rep.input_states) + ",\n";
    out += "    \"spectral_radius\": " + num(rep.input_spectral_radius) + ",\n";
    out += "    \"singular_numbers\": " + vec(rep.singular_numbers) + "\n";
    out += "  },\n";
    out += "  \"k\": " + std::to_string(rep.k) + ",\n";
    out += "  \"sigma_k\": " + num(rep.sigma_k) + ",\n";
    out += "  \"approximant\": " + nested + ",\n";
    out += "  \"diagnostics\": {\n";
    out += "    \"allpass_residuals\": [" + num(rep.diagnostics.allpass_r1) +
           ", " + num(rep.diagnostics.allpass_r2) + ", " +
           num(rep.diagnostics.allpass_r3) + "],\n";
    out += "    \"allpass_scale\": " + num(rep.diagnostics.allpass_scale) +
           ",\n";
    out += "    \"unimodularity_residual\": " +
           num(rep.diagnostics.unimodularity) + ",\n";
    out += "    \"unimodularity_skipped_samples\": " +
           std::to_string(rep.diagnostics.unimod_skipped) + ",\n";
    out += "    \"section_size\": " +
           std::to_string(rep.diagnostics.section_size) + ",\n";
    out += "    \"section_spectral_error\": " +
           num(rep.diagnostics.section_error) + ",\n";
    out += "    \"l2_error\": " + num(rep.diagnostics.l2) + ",\n";
    out += "    \"l2_tail_bound\": " + num(rep.diagnostics.l2_tail) + ",\n";
    out += "    \"hankel_error\": " + num(rep.diagnostics.hankel_error) + "\n";
    out += "  },\n";
    out += "  \"degenerate\": " +
           std::string(rep.degenerate ? "true" : "false") + ",\n";
    if (!rep.recommendation.empty())
        out += "  \"recommendation\": " + json(rep.recommendation).dump() +
               ",\n";
    out += "  \"millis\": " + num(rep.millis) + "\n";
    return out + "}\n";
}

} // namespace aakmin
