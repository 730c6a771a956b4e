#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "aakmin/aak.hpp"
#include "aakmin/linalg.hpp"
#include "aakmin/oracle.hpp"
#include "fixtures.hpp"

using namespace aakmin;

namespace {

// treat the printed demo values as an exact balanced model
SvaModel printed_demo_sva()
{
    SvaModel m;
    m.wfa = fixtures::three_state_demo();
    m.singular_numbers = Eigen::Vector3d(4.67, 1.79, 0.12);
    return m;
}

// shifted circulant: f(t) = 0.5^t for t divisible by 3, else 0.
// Its Hankel singular numbers are (64/63, 8/63, 8/63): the trailing value
// has multiplicity two.
Wfa shift_three()
{
    Wfa w;
    w.alpha = Eigen::Vector3d(1, 0, 0);
    w.beta = Eigen::Vector3d(1, 0, 0);
    w.trans = Eigen::Matrix3d{{0, 0, 0.5}, {0.5, 0, 0}, {0, 0.5, 0}};
    return w;
}

} // namespace

TEST_CASE("partition splits the demo model at k = 2")
{
    PartitionedSva p = partition(printed_demo_sva(), 2);
    CHECK(p.k == 2);
    CHECK(p.r == 1);
    CHECK(p.sigma_k == doctest::Approx(0.12));
    REQUIRE(p.a11.rows() == 2);
    CHECK(p.a11(0, 0) == doctest::Approx(0.579));
    CHECK(p.a11(1, 0) == doctest::Approx(-0.461));
    CHECK(p.a12(0, 0) == doctest::Approx(0.046));
    CHECK(p.a12(1, 0) == doctest::Approx(0.225));
    CHECK(p.a21(0, 0) == doctest::Approx(0.046));
    CHECK(p.a21(0, 1) == doctest::Approx(-0.225));
    CHECK(p.a22(0, 0) == doctest::Approx(-0.387));
    CHECK(p.alpha2(0) == doctest::Approx(0.038));
    CHECK(p.beta2(0) == doctest::Approx(0.038));
    // rvec = sigma_k^2 - sigma_i^2 over the kept block
    CHECK(p.rvec(0) == doctest::Approx(0.12 * 0.12 - 4.67 * 4.67));
    CHECK(p.rvec(1) == doctest::Approx(0.12 * 0.12 - 1.79 * 1.79));
    // permuted automaton reassembles from the blocks
    CHECK((p.wfa.trans.topLeftCorner(2, 2) - p.a11).cwiseAbs().maxCoeff() == 0);
    CHECK((p.wfa.trans.bottomLeftCorner(1, 2) - p.a21).cwiseAbs().maxCoeff() ==
          0);
}

TEST_CASE("partition rejects out-of-range k and multiplicity-splitting cuts")
{
    SvaModel m = printed_demo_sva();
    CHECK_THROWS_AS(partition(m, 0), StageError);
    CHECK_THROWS_AS(partition(m, 3), StageError);

    SvaModel tied;
    tied.wfa.alpha = VectorXd::Ones(4);
    tied.wfa.beta = VectorXd::Ones(4);
    tied.wfa.trans = MatrixXd::Identity(4, 4) * 0.1;
    tied.singular_numbers = VectorXd(4);
    tied.singular_numbers << 1.0, 0.5, 0.5, 0.1;
    CHECK_THROWS_AS(partition(tied, 2), StageError);

    // k = 1 keeps the tied pair whole: multiplicity 2
    PartitionedSva p = partition(tied, 1);
    CHECK(p.r == 2);
    CHECK(p.rvec(0) == doctest::Approx(0.25 - 1.0));
    CHECK(p.rvec(1) == doctest::Approx(0.25 - 0.01));
}

TEST_CASE("auxiliary system matches the closed-form solve on the demo")
{
    PartitionedSva p = partition(printed_demo_sva(), 2);
    AuxiliaryWfa aux = solve_auxiliary(p);
    CHECK(!aux.degenerate);
    REQUIRE(aux.wfa.states() == 2);

    // high-precision values of the closed form on these exact inputs
    CHECK(aux.wfa.trans(0, 0) == doctest::Approx(0.578305).epsilon(1e-4));
    CHECK(aux.wfa.trans(0, 1) == doctest::Approx(0.177919).epsilon(1e-4));
    CHECK(aux.wfa.trans(1, 0) == doctest::Approx(-1.22070).epsilon(1e-4));
    CHECK(aux.wfa.trans(1, 1) == doctest::Approx(-0.169235).epsilon(1e-4));
    CHECK(aux.wfa.beta(0) == doctest::Approx(0.353414).epsilon(1e-4));
    CHECK(aux.wfa.beta(1) == doctest::Approx(0.475640).epsilon(1e-4));

    // defining identity: Ahat (a11' - a21' pinv(beta2') beta1') = I
    MatrixXd sys = p.a11.transpose() -
                   p.a21.transpose() * pinv_row(p.beta2) * p.beta1.transpose();
    CHECK((aux.wfa.trans * sys - MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);

}

TEST_CASE("auxiliary solve falls back when the trailing weights vanish")
{
    SvaModel m = to_sva(fixtures::two_state_parity());
    PartitionedSva p = partition(m, 1);
    CHECK(std::abs(p.alpha2(0)) <= 1e-14);

    AuxiliaryWfa aux = solve_auxiliary(p);
    CHECK(aux.degenerate);
    REQUIRE(aux.wfa.states() == 1);
    CHECK(aux.wfa.trans(0, 0) == 0.0);
    CHECK(aux.wfa.beta(0) == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(aux.wfa.alpha(0) == doctest::Approx(1.2 / std::sqrt(3.0)));

    AllpassResidual ap = allpass_verify(p, aux);
    CHECK(ap.r1 <= 1e-9);
    CHECK(ap.r2 <= 1e-9);
    CHECK(ap.r3 <= 1e-9);
}

TEST_CASE("block diagonalization keeps the stable component only")
{
    // stable 2-state system
    Wfa s;
    s.alpha = Eigen::Vector2d(1.0, 0.5);
    s.beta = Eigen::Vector2d(0.8, -0.3);
    s.trans = Eigen::Matrix2d{{0.3, 0.2}, {-0.1, 0.4}};
    // antistable 1-state system
    const double at = 3.0, aa = 0.7, ab = 1.1;

    MatrixXd d = MatrixXd::Zero(3, 3);
    d.topLeftCorner(2, 2) = s.trans;
    d(2, 2) = at;
    VectorXd alpha(3), beta(3);
    alpha << s.alpha, aa;
    beta << s.beta, ab;

    // hide the split behind a random orthogonal change of basis
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    MatrixXd g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = nd(gen);
    MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();

    AuxiliaryWfa aux;
    aux.wfa.trans = q.transpose() * d * q;
    aux.wfa.alpha = q.transpose() * alpha;
    aux.wfa.beta = q.transpose() * beta;

    Wfa out = block_diagonalize(aux, 2);
    REQUIRE(out.states() == 2);
    CHECK(spectral_radius(out) < 1.0);
    for (long t = 0; t < 16; ++t)
        CHECK(std::abs(evaluate(out, t) - evaluate(s, t)) <= 1e-10);

    // the full function includes the antistable part, the output does not
    CHECK(std::abs(evaluate(aux.wfa, 4) - evaluate(s, 4) -
                   aa * std::pow(at, 4.0) * ab) <= 1e-8);

    // asking for a split that disagrees with the inertia is an error
    CHECK_THROWS_AS(block_diagonalize(aux, 1), StageError);
}

TEST_CASE("full pipeline on the parity model at k = 1")
{
    Wfa w = fixtures::two_state_parity();
    ApproximationReport rep = aak_approximation(w, 1);
    CHECK(rep.degenerate);
    CHECK(!rep.recommendation.empty());
    CHECK(rep.sigma_k == doctest::Approx(0.2).epsilon(1e-12));
    REQUIRE(rep.approximant.states() == 1);

    // certified optimum: the hankel error equals sigma_k exactly
    CHECK(rep.diagnostics.hankel_error == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(rep.diagnostics.section_error <= 0.2 + 1e-8);
    CHECK(rep.diagnostics.section_error >= 0.2 - 1e-6);
    CHECK(rep.diagnostics.l2 + rep.diagnostics.l2_tail <= 0.2 + 1e-8);
    CHECK(rep.diagnostics.allpass_r1 <= 1e-10);
    CHECK(rep.diagnostics.allpass_r2 <= 1e-10);
    CHECK(rep.diagnostics.allpass_r3 <= 1e-10);

    // the approximant keeps only the t = 0 impulse
    CHECK(evaluate(rep.approximant, 0) == doctest::Approx(0.8));
    CHECK(std::abs(evaluate(rep.approximant, 1)) <= 1e-14);
}

TEST_CASE("full pipeline on the demo model at k = 2")
{
    Wfa w = fixtures::three_state_demo();
    ApproximationReport rep = aak_approximation(w, 2);
    CHECK(!rep.degenerate);
    REQUIRE(rep.approximant.states() == 2);
    CHECK(rep.sigma_k == doctest::Approx(0.12).epsilon(2e-2));

    // conjugate pair, pinned against values computed at full precision; the
    // rounded inputs shift the imaginary part past the third decimal
    Eigen::EigenSolver<MatrixXd> eig(rep.approximant.trans);
    const auto l0 = eig.eigenvalues()(0);
    CHECK(std::abs(l0.real() - 0.2041049285) <= 1e-8);
    CHECK(std::abs(std::abs(l0.imag()) - 0.2794853614) <= 1e-8);
    CHECK(std::abs(l0.real() - 0.204593) <= 1e-3);

    const double sk = rep.sigma_k;
    CHECK(std::abs(rep.diagnostics.hankel_error - sk) <= 1e-7 * sk);
    CHECK(rep.diagnostics.section_error <= sk + 1e-8);
    CHECK(rep.diagnostics.section_error >= sk - 1e-5);
    CHECK(rep.diagnostics.unimodularity <= 1e-7);
    CHECK(rep.diagnostics.l2 + rep.diagnostics.l2_tail <= sk + 1e-8);
}

TEST_CASE("pipeline handles a repeated singular number")
{
    Wfa w = shift_three();
    SvaModel m = to_sva(minimize(w));
    CHECK(m.singular_numbers(0) == doctest::Approx(64.0 / 63.0).epsilon(1e-12));
    CHECK(m.singular_numbers(1) == doctest::Approx(8.0 / 63.0).epsilon(1e-12));
    CHECK(m.singular_numbers(2) == doctest::Approx(8.0 / 63.0).epsilon(1e-12));

    ApproximationReport rep = aak_approximation(w, 1);
    const double sk = 8.0 / 63.0;
    CHECK(rep.sigma_k == doctest::Approx(sk).epsilon(1e-12));
    CHECK(std::abs(rep.diagnostics.hankel_error - sk) <= 1e-7 * sk);
    CHECK(rep.diagnostics.allpass_r1 <= 1e-7 * rep.diagnostics.allpass_scale);
    CHECK(rep.diagnostics.allpass_r2 <= 1e-7 * rep.diagnostics.allpass_scale);
    CHECK(rep.diagnostics.allpass_r3 <= 1e-7 * rep.diagnostics.allpass_scale);

    // a cut through the tied pair is refused
    CHECK_THROWS_AS(aak_approximation(w, 2), StageError);
}

TEST_CASE("pipeline input contract")
{
    Wfa w = fixtures::three_state_demo();
    CHECK_THROWS_AS(aak_approximation(w, 0), StageError);
    CHECK_THROWS_AS(aak_approximation(w, 3), StageError);

    Wfa blow = w;
    blow.trans *= 40.0;
    CHECK_THROWS_AS(aak_approximation(blow, 1), StageError);
}
