#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "aakmin/aak.hpp"
#include "aakmin/io.hpp"
#include "fixtures.hpp"

using namespace aakmin;

namespace {

std::string demo_doc()
{
    return R"({
      "alphabet_size": 1,
      "states": 2,
      "alpha": [0.8660254037844386, 0],
      "matrix": [[0, 0.5], [0.5, 0]],
      "beta": [0.8660254037844386, 0],
      "name": "parity"
    })";
}

bool same_bits(const Wfa& a, const Wfa& b)
{
    return a.alpha.size() == b.alpha.size() && a.states() == b.states() &&
           (a.alpha.array() == b.alpha.array()).all() &&
           (a.beta.array() == b.beta.array()).all() &&
           (a.trans.array() == b.trans.array()).all();
}

} // namespace

TEST_CASE("documents parse to validated automata")
{
    WfaDocument doc = parse_wfa(demo_doc());
    CHECK(doc.name == "parity");
    REQUIRE(doc.wfa.states() == 2);
    CHECK(doc.wfa.alpha(0) == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(doc.wfa.trans(0, 1) == 0.5);
    CHECK(evaluate(doc.wfa, 2) == doctest::Approx(0.1875));
}

TEST_CASE("round trip is exact at 17 significant digits")
{
    Wfa w = fixtures::three_state_demo();
    w.alpha(0) = 1.0 / 3.0;
    w.trans(1, 2) = std::sqrt(2.0) * 1e-7;
    w.beta(2) = -7.0 / 11.0;
    WfaDocument back = parse_wfa(emit_wfa(w, "roundtrip"));
    CHECK(back.name == "roundtrip");
    CHECK(same_bits(w, back.wfa));
}

TEST_CASE("parser rejects unsupported alphabets with the restriction")
{
    std::string doc = demo_doc();
    const auto at = doc.find("\"alphabet_size\": 1");
    doc.replace(at, 18, "\"alphabet_size\": 2");
    try {
        parse_wfa(doc);
        FAIL("expected a parse rejection");
    } catch (const StageError& e) {
        CHECK(std::string(e.what()).find("one-letter") != std::string::npos);
        CHECK(e.stage() == Stage::Document);
    }
}

TEST_CASE("parser names missing and malformed pieces")
{
    CHECK_THROWS_AS(parse_wfa("{ not json"), StageError);

    try {
        parse_wfa(R"({"alphabet_size": 1, "states": 2})");
        FAIL("expected a missing-field error");
    } catch (const StageError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }

    // zero states
    CHECK_THROWS_AS(parse_wfa(R"({"alphabet_size": 1, "states": 0,
        "alpha": [], "matrix": [], "beta": []})"),
                    StageError);

    // ragged matrix
    CHECK_THROWS_AS(parse_wfa(R"({"alphabet_size": 1, "states": 2,
        "alpha": [1, 2], "matrix": [[0.1, 0.2], [0.3]], "beta": [1, 2]})"),
                    StageError);

    // non-finite entry
    CHECK_THROWS_AS(parse_wfa(R"({"alphabet_size": 1, "states": 1,
        "alpha": [1e999], "matrix": [[0.1]], "beta": [1]})"),
                    StageError);
}

TEST_CASE("report documents are valid structured text")
{
    Wfa w = fixtures::three_state_demo();
    ApproximationReport rep = aak_approximation(w, 2);

    ReportDocument rd;
    rd.input_states = w.states();
    rd.input_spectral_radius = spectral_radius(w);
    rd.singular_numbers = rep.singular_numbers;
    rd.k = 2;
    rd.sigma_k = rep.sigma_k;
    rd.approximant = rep.approximant;
    rd.diagnostics = rep.diagnostics;
    rd.degenerate = rep.degenerate;
    rd.millis = 1.5;

    const std::string text = emit_report(rd);
    nlohmann::json doc = nlohmann::json::parse(text);
    CHECK(doc["k"] == 2);
    CHECK(doc["input"]["states"] == 3);
    CHECK(doc["sigma_k"].get<double>() == rd.sigma_k);
    CHECK(doc["diagnostics"]["allpass_residuals"].size() == 3);
    CHECK(doc["approximant"]["states"] == 2);

    // the embedded approximant is itself a parseable document
    WfaDocument sub = parse_wfa(doc["approximant"].dump());
    CHECK(same_bits(sub.wfa, rep.approximant));
}
