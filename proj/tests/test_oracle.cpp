#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "aakmin/linalg.hpp"
#include "aakmin/oracle.hpp"
#include "fixtures.hpp"

using namespace aakmin;
using std::complex;

TEST_CASE("hankel sections have constant anti-diagonals")
{
    Wfa w = fixtures::three_state_demo();
    HankelSection h = hankel_section(w, 12);
    REQUIRE(h.entries.rows() == 12);
    for (int i = 1; i < 12; ++i)
        for (int j = 0; j + 1 < 12; ++j)
            CHECK(h.entries(i, j) == h.entries(i - 1, j + 1));
    CHECK(h.entries(0, 0) == doctest::Approx(evaluate(w, 0)));
    CHECK(h.entries(3, 4) == doctest::Approx(evaluate(w, 7)));
}

TEST_CASE("hankel section rejects divergent automata")
{
    Wfa w = fixtures::two_state_parity();
    w.trans *= 1e3;
    CHECK_THROWS_AS(hankel_section(w, 600), StageError);
}

TEST_CASE("circulant truncation is deterministic despite the tied pair")
{
    MatrixXd m = fixtures::circulant3();
    SvdResult s = svd(m);
    CHECK(std::abs(s.s(0) - 6.0) <= 1e-9);
    CHECK(std::abs(s.s(1) - std::sqrt(3.0)) <= 1e-9);
    CHECK(std::abs(s.s(2) - std::sqrt(3.0)) <= 1e-9);

    MatrixXd t = truncated_svd_approx(m, 2);
    CHECK((t - fixtures::circulant3_truncated()).cwiseAbs().maxCoeff() <=
          1e-9);

    // the spectral-norm optimum drops the anti-diagonal constancy
    CHECK(std::abs(t(1, 0) - t(0, 1)) > 0.4);

    // optimal error equals the first discarded singular value
    SvdResult err = svd(m - t);
    CHECK(err.s(0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    CHECK((truncated_svd_approx(m, 3) - m).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(truncated_svd_approx(m, 0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("section spectral error")
{
    Wfa a = fixtures::three_state_demo();
    CHECK(section_spectral_error(a, a, 64) <= 1e-14);

    Wfa b = fixtures::two_state_parity();
    const double e32 = section_spectral_error(a, b, 32);
    const double e64 = section_spectral_error(a, b, 64);
    CHECK(e64 >= e32 - 1e-12); // sections nest
    CHECK(e64 > 0.1);          // the two functions genuinely differ
}

TEST_CASE("l2 error against the parity closed form")
{
    Wfa w = fixtures::two_state_parity();
    Wfa zero;
    zero.alpha = VectorXd::Zero(1);
    zero.beta = VectorXd::Zero(1);
    zero.trans = MatrixXd::Zero(1, 1);

    // sum over even t of (3/4)^2 4^-t = 9/16 * 16/15
    L2Result r = l2_error(w, zero, 512);
    CHECK(r.partial == doctest::Approx(std::sqrt(0.6)).epsilon(1e-13));
    CHECK(r.tail_bound <= 1e-60);

    Wfa blow = w;
    blow.trans *= 3.0;
    CHECK_THROWS_AS(l2_error(blow, zero, 64), StageError);
}

TEST_CASE("symbol evaluation")
{
    Wfa w = fixtures::two_state_parity();
    // closed form: 3z / (4z^2 - 1), value 6/15 at z = 2
    complex<double> v = symbol_eval(w, complex<double>(2.0, 0.0));
    CHECK(std::abs(v - complex<double>(0.4, 0.0)) <= 1e-12);

    // matches the truncated Laurent series away from the spectrum
    complex<double> z(1.3, 0.7);
    complex<double> series = 0;
    complex<double> zp = z;
    for (long t = 0; t < 200; ++t) {
        series += evaluate(w, t) / zp;
        zp *= z;
    }
    CHECK(std::abs(symbol_eval(w, z) - series) <= 1e-8 * std::abs(series));

    // poles are rejected
    CHECK_THROWS_AS(symbol_eval(w, complex<double>(0.5, 0.0)), StageError);
}

TEST_CASE("unimodularity residual of the demo optimum")
{
    SvaModel m = to_sva(minimize(fixtures::three_state_demo()));
    UnimodResult r = unimodularity_residual(m, 2, 64);
    CHECK(r.skipped == 0);
    CHECK(r.max_deviation <= 1e-8);

    // detuning the model destroys unimodularity; the perturbation must be
    // asymmetric, a balanced model with trans = S trans' S for a sign matrix
    // S keeps the ratio unimodular under any symmetry-preserving change
    SvaModel off = m;
    off.wfa.trans(0, 1) += 1e-2;
    UnimodResult bad = unimodularity_residual(off, 2, 64);
    CHECK(bad.max_deviation > 1e-3);
}

TEST_CASE("normalized error symbol has conjugate symmetry")
{
    SvaModel m = to_sva(minimize(fixtures::three_state_demo()));
    const MatrixXd& a = m.wfa.trans;
    const int n = a.rows();
    const MatrixXd id = MatrixXd::Identity(n, n);
    for (double theta : {0.3, 1.1, 2.9}) {
        const complex<double> z = std::polar(1.0, theta);
        const complex<double> zc = std::conj(z);
        auto ratio = [&](complex<double> zz) {
            Eigen::VectorXcd num =
                (zz * id - a).lu().solve(m.wfa.alpha.cast<complex<double>>());
            Eigen::VectorXcd den =
                (id - zz * a.transpose())
                    .lu()
                    .solve(m.wfa.beta.cast<complex<double>>());
            return num(n - 1) / den(n - 1);
        };
        CHECK(std::abs(std::abs(ratio(z)) - std::abs(ratio(zc))) <= 1e-12);
    }
}

TEST_CASE("allpass verification flags a corrupted auxiliary system")
{
    SvaModel m = to_sva(minimize(fixtures::three_state_demo()));
    PartitionedSva p = partition(m, 2);
    AuxiliaryWfa aux = solve_auxiliary(p);

    AllpassResidual good = allpass_verify(p, aux);
    CHECK(good.r1 <= 1e-7 * good.scale);
    CHECK(good.r2 <= 1e-7 * good.scale);
    CHECK(good.r3 <= 1e-7 * good.scale);

    AuxiliaryWfa off = aux;
    off.wfa.alpha(0) += 1e-3;
    AllpassResidual bad = allpass_verify(p, off);
    CHECK(bad.r2 > 1e-4);
}
