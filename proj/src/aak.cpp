#include "aakmin/aak.hpp"

#include <cmath>
#include <string>

#include "aakmin/linalg.hpp"
#include "aakmin/oracle.hpp"

namespace aakmin {

PartitionedSva partition(const SvaModel& m, int k, double mult_tol)
{
    validate(m.wfa);
    const int n = m.wfa.states();
    if (n < 2)
        fail(Stage::Aak, "partition: need at least two states");
    if (m.singular_numbers.size() != n)
        fail(Stage::Aak, "partition: singular number count mismatch");
    if (k < 1 || k >= n)
        fail(Stage::Aak, "partition: rank k = " + std::to_string(k) +
                             " must satisfy 0 < k < " + std::to_string(n));

    const VectorXd& s = m.singular_numbers;
    for (int i = 0; i + 1 < n; ++i)
        if (s(i) < s(i + 1))
            fail(Stage::Aak, "partition: singular numbers not descending");
    if (!(s(n - 1) > 0))
        fail(Stage::Aak, "partition: singular numbers must be positive");

    const double sk = s(k);
    // the multiplicity group of sigma_k (relative grouping)
    int lo = k, hi = k;
    while (lo > 0 && std::abs(s(lo - 1) - sk) <= mult_tol * sk)
        --lo;
    while (hi + 1 < n && std::abs(s(hi + 1) - sk) <= mult_tol * sk)
        ++hi;
    if (lo < k)
        fail(Stage::Aak,
             "partition: rank " + std::to_string(k) +
                 " falls inside the multiplicity group of sigma = " +
                 std::to_string(sk) + " (group spans indices " +
                 std::to_string(lo) + ".." + std::to_string(hi) +
                 "); choose a rank at a spectral gap");
    const int r = hi - k + 1;

    // permutation: leading sigmas, then the tail beyond the group, then the
    // group itself
    std::vector<int> perm;
    perm.reserve(n);
    for (int i = 0; i < k; ++i)
        perm.push_back(i);
    for (int i = hi + 1; i < n; ++i)
        perm.push_back(i);
    for (int i = k; i <= hi; ++i)
        perm.push_back(i);

    PartitionedSva p;
    p.k = k;
    p.r = r;
    p.sigma_k = sk;
    const int nl = n - r;

    p.wfa.alpha.resize(n);
    p.wfa.beta.resize(n);
    p.wfa.trans.resize(n, n);
    p.sigma.resize(nl);
    for (int i = 0; i < n; ++i) {
        p.wfa.alpha(i) = m.wfa.alpha(perm[i]);
        p.wfa.beta(i) = m.wfa.beta(perm[i]);
        for (int j = 0; j < n; ++j)
            p.wfa.trans(i, j) = m.wfa.trans(perm[i], perm[j]);
        if (i < nl)
            p.sigma(i) = s(perm[i]);
    }

    p.a11 = p.wfa.trans.topLeftCorner(nl, nl);
    p.a12 = p.wfa.trans.topRightCorner(nl, r);
    p.a21 = p.wfa.trans.bottomLeftCorner(r, nl);
    p.a22 = p.wfa.trans.bottomRightCorner(r, r);
    p.alpha1 = p.wfa.alpha.head(nl);
    p.beta1 = p.wfa.beta.head(nl);
    p.alpha2 = p.wfa.alpha.tail(r);
    p.beta2 = p.wfa.beta.tail(r);
    p.rvec = VectorXd::Constant(nl, sk * sk) - p.sigma.cwiseProduct(p.sigma);
    return p;
}

AuxiliaryWfa solve_auxiliary(const PartitionedSva& p, double zero_tol)
{
    const int nl = static_cast<int>(p.sigma.size());
    AuxiliaryWfa aux;

    const double alpha_norm = p.wfa.alpha.norm();
    const bool alpha2_zero = p.alpha2.norm() <= zero_tol * alpha_norm;

    if (!alpha2_zero) {
        // weighted trailing data pins the system completely
        VectorXd b2p = pinv_row(p.beta2);
        VectorXd a2p = pinv_row(p.alpha2);
        MatrixXd sys = p.a11.transpose() -
                       (p.a21.transpose() * b2p) * p.beta1.transpose();
        Eigen::FullPivLU<MatrixXd> lu(sys);
        const double pmax = std::abs(lu.matrixLU()(0, 0));
        const double pmin =
            std::abs(lu.matrixLU()(nl - 1, nl - 1));
        if (!lu.isInvertible() || !(pmin > 1e-14 * std::max(pmax, 1e-300)))
            fail(Stage::Aak,
                 "solve_auxiliary: system matrix is numerically singular "
                 "(pivot ratio " +
                     std::to_string(pmin / std::max(pmax, 1e-300)) + ")");
        MatrixXd ahat = lu.inverse();
        aux.wfa.trans = ahat;
        aux.wfa.beta = -(ahat * (p.a21.transpose() * b2p));
        aux.wfa.alpha =
            ahat.transpose() * (p.rvec.asDiagonal() * (p.a12 * a2p));
        return aux;
    }

    // underdetermined branch: any nonzero Ahat annihilating a21' will do;
    // take the orthogonal projector onto null(a21)
    Eigen::JacobiSVD<MatrixXd> dec(p.a21, Eigen::ComputeFullV);
    const auto& sv = dec.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-12 * std::max(top, 1e-300))
            ++rank;
    MatrixXd ahat;
    if (rank >= nl) {
        // trailing block too large; the only admissible matrix is zero
        aux.degenerate = true;
        ahat = MatrixXd::Zero(nl, nl);
    } else {
        MatrixXd w = dec.matrixV().rightCols(nl - rank);
        ahat = w * w.transpose();
    }
    aux.wfa.trans = ahat;
    VectorXd b1p = pinv_row(p.beta1);
    VectorXd a1p = pinv_row(p.alpha1);
    aux.wfa.beta =
        (MatrixXd::Identity(nl, nl) - ahat * p.a11.transpose()) * b1p;
    aux.wfa.alpha = -(p.rvec.asDiagonal() * a1p -
                      ahat.transpose() * (p.rvec.asDiagonal() * (p.a11 * a1p)));
    return aux;
}

namespace {

int count_inside_disc(const MatrixXd& a)
{
    Eigen::EigenSolver<MatrixXd> es(a, false);
    int inside = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < 1.0)
            ++inside;
    return inside;
}

} // namespace

Wfa block_diagonalize(const AuxiliaryWfa& aux, int k)
{
    validate(aux.wfa);
    const int n = aux.wfa.states();
    if (k < 0 || k > n)
        fail(Stage::Aak, "block_diagonalize: invalid target dimension");

    const int inside = count_inside_disc(aux.wfa.trans);
    if (inside != k)
        fail(Stage::Aak,
             "block_diagonalize: expected " + std::to_string(k) +
                 " eigenvalues inside the unit disc, found " +
                 std::to_string(inside));
    if (n == k)
        return aux.wfa;

    OrderedSchur os = ordered_schur(aux.wfa.trans);

    // the cut must fall on a block boundary; a conjugate pair straddling it
    // would mean the inside count cannot equal k in the first place
    int pos = 0;
    bool boundary = pos == k;
    for (int size : os.block_sizes) {
        pos += size;
        if (pos == k)
            boundary = true;
    }
    if (!boundary)
        fail(Stage::Aak, "block_diagonalize: the cut splits a complex "
                         "conjugate block");

    const int m = n - k;
    MatrixXd t11 = os.t.topLeftCorner(k, k);
    MatrixXd t12 = os.t.topRightCorner(k, m);
    MatrixXd t22 = os.t.bottomRightCorner(m, m);
    MatrixXd x = solve_sylvester(t11, t22, t12);

    // similarity [[I, x], [0, I]] decouples the stable block; projecting
    // onto it keeps the function's stable part
    MatrixXd mm = MatrixXd::Identity(n, n);
    mm.topRightCorner(k, m) = x;
    MatrixXd mi = MatrixXd::Identity(n, n);
    mi.topRightCorner(k, m) = -x;

    Wfa out;
    out.trans = (mi * os.u.transpose() * aux.wfa.trans * os.u * mm)
                    .topLeftCorner(k, k);
    out.alpha = (mm.transpose() * os.u.transpose() * aux.wfa.alpha).head(k);
    out.beta = (mi * os.u.transpose() * aux.wfa.beta).head(k);

    if (!is_irredundant(out))
        fail(Stage::Aak, "block_diagonalize: extracted part is not stable "
                         "(spectral radius " +
                             std::to_string(spectral_radius(out)) + ")");
    return out;
}

ApproximationReport aak_approximation(const Wfa& w, int k,
                                      const AakOptions& opts)
{
    validate(w);
    if (!is_irredundant(w))
        fail(Stage::Aak, "aak_approximation: automaton is not irredundant "
                         "(spectral radius " +
                             std::to_string(spectral_radius(w)) + ")");

    MinimizeResult mr = minimize_with_diagnostics(w, opts.minimize_tol);
    const int n = mr.wfa.states();
    if (k < 1 || k >= n)
        fail(Stage::Aak, "aak_approximation: rank k = " + std::to_string(k) +
                             " must satisfy 0 < k < n = " + std::to_string(n) +
                             " (after minimization)");

    SvaModel sva = to_sva(mr.wfa);
    PartitionedSva part = partition(sva, k, opts.mult_tol);
    AuxiliaryWfa aux = solve_auxiliary(part, opts.alpha2_zero_tol);

    ApproximationReport rep;
    rep.sigma_k = part.sigma_k;
    rep.singular_numbers = sva.singular_numbers;
    rep.degenerate = aux.degenerate;
    rep.minimize_warning = mr.warning;

    if (aux.degenerate) {
        rep.recommendation =
            "the multiplicity of sigma_k leaves no admissible transition "
            "matrix at rank " +
            std::to_string(k) + "; try rank " + std::to_string(k - 1) +
            (k + 1 < n ? " or " + std::to_string(k + 1) : "");
        const int nl = static_cast<int>(part.sigma.size());
        if (nl == k) {
            rep.approximant = aux.wfa;
        } else {
            // with a zero transition matrix the auxiliary function is a
            // single impulse; represent it on k states
            rep.approximant.alpha = VectorXd::Zero(k);
            rep.approximant.alpha(0) = aux.wfa.alpha.dot(aux.wfa.beta);
            rep.approximant.beta = VectorXd::Zero(k);
            rep.approximant.beta(0) = 1.0;
            rep.approximant.trans = MatrixXd::Zero(k, k);
        }
    } else {
        // invariant: the stable eigenvalue count of the auxiliary matrix
        // must match the number of singular numbers above sigma_k
        int above = 0;
        for (int i = 0; i < part.rvec.size(); ++i)
            if (part.rvec(i) < 0)
                ++above;
        if (above != k)
            fail(Stage::Aak,
                 "aak_approximation: inertia mismatch, " +
                     std::to_string(above) + " singular numbers above " +
                     "sigma_k but rank " + std::to_string(k) + " requested");
        rep.approximant = block_diagonalize(aux, k);
    }

    AllpassResidual ap = allpass_verify(part, aux);
    rep.diagnostics.allpass_r1 = ap.r1;
    rep.diagnostics.allpass_r2 = ap.r2;
    rep.diagnostics.allpass_r3 = ap.r3;
    rep.diagnostics.allpass_scale = ap.scale;

    UnimodResult um =
        unimodularity_residual(sva, k, opts.unimod_samples, opts.mult_tol);
    rep.diagnostics.unimodularity = um.max_deviation;
    rep.diagnostics.unimod_skipped = um.skipped;

    rep.diagnostics.section_size = opts.section_size;
    rep.diagnostics.section_error =
        section_spectral_error(w, rep.approximant, opts.section_size);

    L2Result l2 = l2_error(w, rep.approximant, opts.l2_terms);
    rep.diagnostics.l2 = l2.partial;
    rep.diagnostics.l2_tail = l2.tail_bound;

    rep.diagnostics.hankel_error =
        exact_hankel_norm(difference(w, rep.approximant).combined);
    return rep;
}

} // namespace aakmin
