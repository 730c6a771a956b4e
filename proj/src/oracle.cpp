#include "aakmin/oracle.hpp"

#include <cmath>
#include <string>

#include "aakmin/linalg.hpp"

namespace aakmin {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

HankelSection hankel_section(const Wfa& w, int n)
{
    validate(w);
    if (n < 1)
        fail(Stage::Oracle, "hankel_section: size must be positive");
    std::vector<double> f = evaluate_prefix(w, 2L * n - 1);
    for (double v : f)
        if (!std::isfinite(v))
            fail(Stage::Oracle,
                 "hankel_section: function overflowed (redundant automaton?)");
    HankelSection h;
    h.source = w;
    h.entries.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h.entries(i, j) = f[static_cast<size_t>(i) + j];
    return h;
}

Eigen::MatrixXd truncated_svd_approx(const Eigen::MatrixXd& m, int k)
{
    if (k < 0)
        fail(Stage::Oracle, "truncated_svd_approx: negative rank");
    const Eigen::Index rank_max = std::min(m.rows(), m.cols());
    if (k >= rank_max)
        return m;
    if (k == 0)
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());

    SvdResult s = svd(m);
    Eigen::MatrixXd u = s.u;
    Eigen::MatrixXd v = s.v;

    // when the cut splits a group of (numerically) equal singular values the
    // truncation is not determined by the values alone; rotate the tied
    // block so the discarded directions carry no weight on the leading
    // coordinate axes, making the choice reproducible
    const double tie_tol = 1e-12 * std::max(s.s(0), 1e-300);
    int lo = k, hi = k - 1;
    while (lo > 0 && s.s(lo - 1) - s.s(k) <= tie_tol)
        --lo;
    while (hi + 1 < s.s.size() && s.s(k - 1) - s.s(hi + 1) <= tie_tol)
        ++hi;
    if (lo < k && hi >= k) {
        const int g = hi - lo + 1;  // group size
        const int d = hi - k + 1;   // discarded part of the group
        // rotation whose trailing d columns span the null space of the top
        // d rows of the group's left block
        Eigen::MatrixXd top_rows = u.block(0, lo, d, g);
        Eigen::JacobiSVD<Eigen::MatrixXd> ns(top_rows, Eigen::ComputeFullV);
        int trank = 0;
        for (int i = 0; i < ns.singularValues().size(); ++i)
            if (ns.singularValues()(i) >
                1e-12 * std::max(ns.singularValues()(0), 1e-300))
                ++trank;
        if (trank + d <= g) {
            Eigen::MatrixXd rot(g, g);
            rot.leftCols(g - d) << ns.matrixV().leftCols(trank),
                ns.matrixV().middleCols(trank + d, g - d - trank);
            rot.rightCols(d) = ns.matrixV().middleCols(trank, d);
            u.middleCols(lo, g) = (u.middleCols(lo, g) * rot).eval();
            v.middleCols(lo, g) = (v.middleCols(lo, g) * rot).eval();
        }
    }

    return u.leftCols(k) * s.s.head(k).asDiagonal() * v.leftCols(k).transpose();
}

double section_spectral_error(const Wfa& a, const Wfa& b, int n)
{
    DifferenceWfa d = difference(a, b);
    HankelSection h = hankel_section(d.combined, n);
    Eigen::BDCSVD<Eigen::MatrixXd> s(h.entries);
    return s.singularValues()(0);
}

L2Result l2_error(const Wfa& a, const Wfa& b, int terms)
{
    if (terms < 1)
        fail(Stage::Oracle, "l2_error: need at least one term");
    DifferenceWfa d = difference(a, b);
    const double rho = spectral_radius(d.combined);
    if (!(rho < 1.0))
        fail(Stage::Oracle, "l2_error: spectral radius " +
                                std::to_string(rho) +
                                " is not below one, the tail is unbounded");
    std::vector<double> f = evaluate_prefix(d.combined, terms);
    double sum = 0;
    for (double v : f) {
        if (!std::isfinite(v))
            fail(Stage::Oracle, "l2_error: function overflowed");
        sum += v * v;
    }

    L2Result out;
    out.partial = std::sqrt(sum);
    if (rho > 0) {
        // envelope |f(t)| <= c rho^t fitted over the window, then summed
        double c = 0;
        double pw = 1.0;
        for (int t = 0; t < terms && pw > 1e-250; ++t) {
            c = std::max(c, std::abs(f[static_cast<size_t>(t)]) / pw);
            pw *= rho;
        }
        out.tail_bound =
            c * std::pow(rho, terms) / std::sqrt(1.0 - rho * rho);
    }
    return out;
}

std::complex<double> symbol_eval(const Wfa& w, std::complex<double> z)
{
    validate(w);
    Eigen::EigenSolver<MatrixXd> es(w.trans, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(z - es.eigenvalues()(i)) < 1e-12)
            fail(Stage::Oracle,
                 "symbol_eval: z collides with an eigenvalue of the "
                 "transition matrix");
    const auto n = w.states();
    MatrixXcd sys = z * MatrixXcd::Identity(n, n) - w.trans.cast<std::complex<double>>();
    VectorXcd x = sys.partialPivLu().solve(w.beta.cast<std::complex<double>>());
    return w.alpha.cast<std::complex<double>>().dot(x);
}

UnimodResult unimodularity_residual(const SvaModel& m, int k, int samples,
                                    double mult_tol)
{
    if (samples < 1)
        fail(Stage::Oracle, "unimodularity_residual: need samples");
    PartitionedSva p = partition(m, k, mult_tol);
    const int n = p.wfa.states();
    const int r = p.r;

    const MatrixXcd a = p.wfa.trans.cast<std::complex<double>>();
    const VectorXcd alpha = p.wfa.alpha.cast<std::complex<double>>();
    const VectorXcd beta = p.wfa.beta.cast<std::complex<double>>();
    const MatrixXcd id = MatrixXcd::Identity(n, n);

    UnimodResult out;
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * M_PI * j / samples;
        const std::complex<double> z(std::cos(th), std::sin(th));
        // trailing entries of the two resolvent rows: alpha'(zI - A')^-1
        // and beta'(I - zA)^-1, evaluated as column solves
        VectorXcd num_full = (z * id - a).partialPivLu().solve(alpha);
        VectorXcd den_full =
            (id - z * a.transpose()).partialPivLu().solve(beta);
        for (int i = 0; i < r; ++i) {
            const std::complex<double> num = num_full(n - r + i);
            const std::complex<double> den = den_full(n - r + i);
            if (std::abs(den) < 1e-13) {
                ++out.skipped;
                continue;
            }
            out.max_deviation = std::max(
                out.max_deviation, std::abs(std::abs(num / den) - 1.0));
        }
    }
    return out;
}

AllpassResidual allpass_verify(const PartitionedSva& p, const AuxiliaryWfa& aux)
{
    const int nl = static_cast<int>(p.sigma.size());
    const int r = p.r;
    const int n = nl + r;
    const int ne = n + nl;
    if (aux.wfa.states() != nl)
        fail(Stage::Oracle, "allpass_verify: auxiliary dimension mismatch");
    for (int i = 0; i < nl; ++i)
        if (std::abs(p.rvec(i)) < 1e-300)
            fail(Stage::Oracle, "allpass_verify: R is singular");

    MatrixXd ae = MatrixXd::Zero(ne, ne);
    ae.topLeftCorner(n, n) = p.wfa.trans;
    ae.bottomRightCorner(nl, nl) = aux.wfa.trans;
    VectorXd be(ne), al(ne);
    be << p.wfa.beta, aux.wfa.beta;
    al << p.wfa.alpha, -aux.wfa.alpha;

    const double sk = p.sigma_k;
    MatrixXd pe = MatrixXd::Zero(ne, ne);
    MatrixXd qe = MatrixXd::Zero(ne, ne);
    for (int i = 0; i < nl; ++i) {
        pe(i, i) = p.sigma(i);
        qe(i, i) = p.sigma(i);
        pe(i, n + i) = pe(n + i, i) = 1.0;
        qe(i, n + i) = qe(n + i, i) = p.rvec(i);
        pe(n + i, n + i) = -p.sigma(i) / p.rvec(i);
        qe(n + i, n + i) = -p.sigma(i) * p.rvec(i);
    }
    for (int i = 0; i < r; ++i) {
        pe(nl + i, nl + i) = sk;
        qe(nl + i, nl + i) = sk;
    }

    AllpassResidual res;
    res.r1 = (pe - ae * pe * ae.transpose() - be * be.transpose())
                 .cwiseAbs()
                 .maxCoeff();
    res.r2 = (qe - ae.transpose() * qe * ae - al * al.transpose())
                 .cwiseAbs()
                 .maxCoeff();
    res.r3 = (pe * qe - sk * sk * MatrixXd::Identity(ne, ne))
                 .cwiseAbs()
                 .maxCoeff();
    res.scale = std::max(1.0, p.sigma(0) * p.sigma(0));
    return res;
}

} // namespace aakmin
