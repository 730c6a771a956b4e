#include "aakmin/sva.hpp"

#include <cmath>
#include <string>

#include "aakmin/linalg.hpp"

namespace aakmin {

namespace {

constexpr double kPosDefTol = 1e-12;

// Smallest eigenvalue; errors (naming the offending Gramian) when the
// matrix is not numerically positive definite.
double check_posdef(const MatrixXd& g, const char* which)
{
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > kPosDefTol * std::max(hi, 1e-300)))
        fail(Stage::Sva, std::string(which) +
                             " Gramian is numerically singular (smallest "
                             "eigenvalue " +
                             std::to_string(lo) +
                             "); the automaton is not minimal");
    return lo;
}

} // namespace

Gramians gramians(const Wfa& w)
{
    validate(w);
    const double rho = spectral_radius(w);
    if (!(rho < 1.0 - 1e-12))
        fail(Stage::Sva, "gramians: automaton is not irredundant, spectral "
                         "radius is " +
                             std::to_string(rho));
    Gramians g;
    g.p = solve_stein(w.trans, w.beta * w.beta.transpose());
    g.q = solve_stein(w.trans.transpose(), w.alpha * w.alpha.transpose());
    g.p_min_eig = check_posdef(g.p, "reachability");
    g.q_min_eig = check_posdef(g.q, "observability");
    return g;
}

SvaModel to_sva(const Wfa& w)
{
    validate(w);
    const double rho = spectral_radius(w);
    if (!(rho < 1.0 - 1e-12))
        fail(Stage::Sva, "to_sva: automaton is not irredundant, spectral "
                         "radius is " +
                             std::to_string(rho));
    const auto n = w.states();

    // square-root balancing on Gramian factors p = lp lp', q = lq lq'.
    // The factors keep trailing singular numbers accurate where forming the
    // Gramians would square away half the digits, and they make the
    // minimality judgment below independent of the input basis
    MatrixXd lpm = stein_factor(w.trans, w.beta);
    MatrixXd lqm = stein_factor(w.trans.transpose(), w.alpha);

    SvdResult cross = svd(lqm.transpose() * lpm);
    if (cross.s.size() < n || !(cross.s(n - 1) > 1e-12 * cross.s(0)))
        fail(Stage::Sva,
             "to_sva: trailing singular number is numerically zero "
             "relative to the leading one; the automaton is not minimal");

    VectorXd shalf = cross.s.cwiseSqrt();
    MatrixXd t = lpm * cross.v * shalf.cwiseInverse().asDiagonal();
    MatrixXd tinv = shalf.cwiseInverse().asDiagonal() *
                    cross.u.transpose() * lqm.transpose();

    // pin the sign freedom: flip each basis vector so its dominant entry
    // (the diagonal one when it is not negligible) is positive
    for (int j = 0; j < n; ++j) {
        int pivot;
        t.col(j).cwiseAbs().maxCoeff(&pivot);
        if (std::abs(t(j, j)) >= 0.1 * std::abs(t(pivot, j)))
            pivot = j;
        if (t(pivot, j) < 0) {
            t.col(j) = -t.col(j);
            tinv.row(j) = -tinv.row(j);
        }
    }

    SvaModel m;
    m.singular_numbers = cross.s;
    m.wfa.trans = tinv * w.trans * t;
    m.wfa.alpha = t.transpose() * w.alpha;
    m.wfa.beta = tinv * w.beta;

    // both transformed Gramians must equal diag(singular numbers)
    const double s0 = cross.s(0);
    const MatrixXd p = lpm * lpm.transpose();
    const MatrixXd q = lqm * lqm.transpose();
    const double dp =
        (tinv * p * tinv.transpose() - MatrixXd(cross.s.asDiagonal()))
            .cwiseAbs()
            .maxCoeff();
    const double dq =
        (t.transpose() * q * t - MatrixXd(cross.s.asDiagonal()))
            .cwiseAbs()
            .maxCoeff();
    if (!(dp <= 1e-8 * s0) || !(dq <= 1e-8 * s0))
        fail(Stage::Sva, "to_sva: balanced Gramians deviate from the "
                         "diagonal by " +
                             std::to_string(std::max(dp, dq)));
    const double weight_gap =
        (m.wfa.alpha.cwiseAbs() - m.wfa.beta.cwiseAbs()).cwiseAbs().maxCoeff();
    if (!(weight_gap <= 1e-8 * std::max(1.0, m.wfa.alpha.cwiseAbs().maxCoeff())))
        fail(Stage::Sva,
             "to_sva: weight magnitudes split by " + std::to_string(weight_gap));
    return m;
}

double exact_hankel_norm(const Wfa& w)
{
    Wfa m = minimize(w);
    if (m.alpha.cwiseAbs().maxCoeff() == 0.0 ||
        m.beta.cwiseAbs().maxCoeff() == 0.0)
        return 0.0;
    validate(m);

    // the norm is the top singular value of lq' lp for any Gramian factors
    // p = lp lp', q = lq lq'.  Working on factors keeps full accuracy when
    // the norm is many orders below the Gramian scale, and tolerates the
    // stiff bases minimize picks for difference systems: nearly unreachable
    // directions only contribute negligible singular values, they are not
    // grounds to abort
    MatrixXd lp = stein_factor(m.trans, m.beta);
    MatrixXd lq = stein_factor(m.trans.transpose(), m.alpha);
    return svd(lq.transpose() * lp).s(0);
}

} // namespace aakmin
