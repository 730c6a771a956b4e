#include "aakmin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aakmin/errors.hpp"
#include "aakmin/wfa.hpp"

namespace aakmin {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kSteinResidualTol = 1e-10;
constexpr double kSylvesterResidualTol = 1e-9;
// above this size the n^2 x n^2 vectorized solve stops being the cheap option
constexpr int kSteinKroneckerLimit = 24;

MatrixXd stein_kronecker(const MatrixXd& a, const MatrixXd& m)
{
    const auto n = a.rows();
    MatrixXd sys = MatrixXd::Identity(n * n, n * n);
    // sys = I - kron(a, a); column-major vec convention, vec(a x a') = kron(a, a) vec(x)
    for (Eigen::Index bc = 0; bc < n; ++bc)
        for (Eigen::Index br = 0; br < n; ++br)
            sys.block(br * n, bc * n, n, n) -= a(br, bc) * a;
    VectorXd rhs = Eigen::Map<const VectorXd>(m.data(), n * n);
    VectorXd x = sys.partialPivLu().solve(rhs);
    return Eigen::Map<const MatrixXd>(x.data(), n, n);
}

// Schur reduction: with a = U T U^H the equation becomes Y - T Y T^H = C,
// solved column by column from the right (each column needs one triangular
// solve against I - conj(T_jj) T).
MatrixXd stein_schur(const MatrixXd& a, const MatrixXd& m)
{
    const auto n = a.rows();
    Eigen::ComplexSchur<MatrixXd> schur(a);
    const MatrixXcd& t = schur.matrixT();
    const MatrixXcd& u = schur.matrixU();
    MatrixXcd c = u.adjoint() * m * u;
    MatrixXcd y = MatrixXcd::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        VectorXcd rhs = c.col(j);
        if (j + 1 < n) {
            VectorXcd w = y.rightCols(n - j - 1) *
                          t.row(j).tail(n - j - 1).adjoint();
            rhs += t.triangularView<Eigen::Upper>() * w;
        }
        MatrixXcd lhs = -std::conj(t(j, j)) * t;
        lhs.diagonal().array() += 1.0;
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return (u * y * u.adjoint()).real();
}

} // namespace

MatrixXd solve_stein(const MatrixXd& a, const MatrixXd& m)
{
    const auto n = a.rows();
    if (a.cols() != n || m.rows() != n || m.cols() != n)
        fail(Stage::Linalg, "solve_stein: dimension mismatch");
    const double rho = spectral_radius(a);
    if (!(rho < 1.0))
        fail(Stage::Linalg,
             "solve_stein: spectral radius " + std::to_string(rho) +
                 " is not below one, equation is not uniquely solvable");

    MatrixXd x = n <= kSteinKroneckerLimit ? stein_kronecker(a, m)
                                           : stein_schur(a, m);
    if (m.isApprox(m.transpose(), 1e-13))
        x = ((x + x.transpose()) / 2).eval();

    const double mscale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double res = (x - a * x * a.transpose() - m).cwiseAbs().maxCoeff();
    if (!(res <= kSteinResidualTol * mscale))
        fail(Stage::Linalg, "solve_stein: residual " + std::to_string(res) +
                                " exceeds " +
                                std::to_string(kSteinResidualTol * mscale));
    return x;
}

MatrixXd stein_factor(const MatrixXd& a, const MatrixXd& b)
{
    const auto n = a.rows();
    if (a.cols() != n || b.rows() != n)
        fail(Stage::Linalg, "stein_factor: dimension mismatch");
    const double rho = spectral_radius(a);
    if (!(rho < 1.0))
        fail(Stage::Linalg,
             "stein_factor: spectral radius " + std::to_string(rho) +
                 " is not below one, equation is not uniquely solvable");
    if (b.cols() == 0)
        return MatrixXd::Zero(n, 0);

    // after step j the columns of l span a^t b for all t < 2^j; m = a^(2^j)
    MatrixXd l = b;
    MatrixXd m = a;
    for (int step = 0; step < 96; ++step) {
        MatrixXd ml = m * l;
        if (!std::isfinite(ml.norm()))
            fail(Stage::Linalg, "stein_factor: iteration diverged");
        if (ml.norm() <= 1e-18 * l.norm())
            break;

        MatrixXd grown(n, l.cols() + ml.cols());
        grown << l, ml;
        SvdResult dec = svd(grown); // exact column compression to rank <= n
        l = dec.u * dec.s.asDiagonal();
        m = (m * m).eval();
    }

    const MatrixXd p = l * l.transpose();
    const double scale =
        std::max({1.0, p.cwiseAbs().maxCoeff(),
                  (b * b.transpose()).cwiseAbs().maxCoeff()});
    const double res =
        (p - a * p * a.transpose() - b * b.transpose()).cwiseAbs().maxCoeff();
    if (!(res <= kSteinResidualTol * scale))
        fail(Stage::Linalg, "stein_factor: residual " + std::to_string(res) +
                                " exceeds " +
                                std::to_string(kSteinResidualTol * scale));
    return l;
}

MatrixXd solve_sylvester(const MatrixXd& p, const MatrixXd& q,
                         const MatrixXd& c)
{
    const auto k = p.rows(), m = q.rows();
    if (p.cols() != k || q.cols() != m || c.rows() != k || c.cols() != m)
        fail(Stage::Linalg, "solve_sylvester: dimension mismatch");
    if (k == 0 || m == 0)
        return MatrixXd(k, m);

    Eigen::ComplexSchur<MatrixXd> sp(p), sq(q);
    const MatrixXcd& tp = sp.matrixT();
    const MatrixXcd& tq = sq.matrixT();

    double top = 1.0;
    for (Eigen::Index i = 0; i < k; ++i)
        top = std::max(top, std::abs(tp(i, i)));
    for (Eigen::Index j = 0; j < m; ++j)
        top = std::max(top, std::abs(tq(j, j)));
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (std::abs(tp(i, i) - tq(j, j)) < 1e-12 * top)
                fail(Stage::Linalg,
                     "solve_sylvester: spectra overlap near eigenvalue (" +
                         std::to_string(tp(i, i).real()) + ", " +
                         std::to_string(tp(i, i).imag()) + "i)");

    // p x - x q + c = 0  ->  Tp y - y Tq = -C with y = Up^H x Uq
    MatrixXcd ct = sp.matrixU().adjoint() * c * sq.matrixU();
    MatrixXcd y = MatrixXcd::Zero(k, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        VectorXcd rhs = -ct.col(j);
        if (j > 0)
            rhs += y.leftCols(j) * tq.col(j).head(j);
        MatrixXcd lhs = tp;
        lhs.diagonal().array() -= tq(j, j);
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    MatrixXd x = (sp.matrixU() * y * sq.matrixU().adjoint()).real();

    const double cscale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double res = (p * x - x * q + c).cwiseAbs().maxCoeff();
    if (!(res <= kSylvesterResidualTol * cscale))
        fail(Stage::Linalg, "solve_sylvester: residual " +
                                std::to_string(res) + " exceeds " +
                                std::to_string(kSylvesterResidualTol * cscale));
    return x;
}

namespace {

struct Block {
    int start;
    int size;
    double modulus;
};

double block_modulus(const MatrixXd& t, int start, int size)
{
    if (size == 1)
        return std::abs(t(start, start));
    const double det = t(start, start) * t(start + 1, start + 1) -
                       t(start, start + 1) * t(start + 1, start);
    return std::sqrt(std::max(det, 0.0));
}

// Orthogonal swap of two adjacent diagonal blocks.  The columns of
// [x; I] span the invariant subspace of the trailing block, so the full
// QR factor of that matrix moves it to the front.
void swap_adjacent(MatrixXd& t, MatrixXd& u, int i, int p1, int p2)
{
    const int w = p1 + p2;
    const auto n = t.rows();
    MatrixXd a11 = t.block(i, i, p1, p1);
    MatrixXd a12 = t.block(i, i + p1, p1, p2);
    MatrixXd a22 = t.block(i + p1, i + p1, p2, p2);

    // a11 x - x a22 = -a12, vectorized (at most 4 unknowns)
    MatrixXd sys = MatrixXd::Zero(p1 * p2, p1 * p2);
    for (int bc = 0; bc < p2; ++bc) {
        for (int br = 0; br < p1; ++br) {
            for (int cc = 0; cc < p1; ++cc)
                sys(bc * p1 + br, bc * p1 + cc) += a11(br, cc);
            for (int cc = 0; cc < p2; ++cc)
                sys(bc * p1 + br, cc * p1 + br) -= a22(cc, bc);
        }
    }
    VectorXd rhs = -Eigen::Map<const VectorXd>(a12.data(), p1 * p2);
    VectorXd xv = sys.partialPivLu().solve(rhs);
    MatrixXd x = Eigen::Map<const MatrixXd>(xv.data(), p1, p2);

    MatrixXd stacked(w, p2);
    stacked.topRows(p1) = x;
    stacked.bottomRows(p2) = MatrixXd::Identity(p2, p2);
    Eigen::HouseholderQR<MatrixXd> qr(stacked);
    MatrixXd q = qr.householderQ();

    t.block(i, i, w, w) = q.transpose() * t.block(i, i, w, w) * q;
    t.block(i + p2, i, p1, p2).setZero();
    if (i > 0)
        t.block(0, i, i, w) = t.block(0, i, i, w) * q;
    if (i + w < n)
        t.block(i, i + w, w, n - i - w) =
            q.transpose() * t.block(i, i + w, w, n - i - w);
    u.middleCols(i, w) = u.middleCols(i, w) * q;
}

} // namespace

OrderedSchur ordered_schur(const MatrixXd& a)
{
    const auto n = a.rows();
    if (a.cols() != n)
        fail(Stage::Linalg, "ordered_schur: matrix is not square");
    OrderedSchur out;
    if (n == 0) {
        out.u = out.t = MatrixXd(0, 0);
        return out;
    }

    Eigen::RealSchur<MatrixXd> schur(a);
    out.t = schur.matrixT();
    out.u = schur.matrixU();

    std::vector<Block> blocks;
    for (int i = 0; i < n;) {
        const int size = (i + 1 < n && out.t(i + 1, i) != 0.0) ? 2 : 1;
        blocks.push_back({i, size, block_modulus(out.t, i, size)});
        i += size;
    }

    // bubble pass on block moduli; each swap is one orthogonal similarity
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t b = 0; b + 1 < blocks.size(); ++b) {
            Block &l = blocks[b], &r = blocks[b + 1];
            if (l.modulus > r.modulus * (1 + 1e-13) + 1e-300) {
                swap_adjacent(out.t, out.u, l.start, l.size, r.size);
                std::swap(l.size, r.size);
                std::swap(l.modulus, r.modulus);
                r.start = l.start + l.size;
                moved = true;
            }
        }
    }

    for (const Block& b : blocks) {
        out.block_sizes.push_back(b.size);
        if (b.size == 1) {
            out.eigenvalues.emplace_back(out.t(b.start, b.start), 0.0);
        } else {
            const double tr =
                (out.t(b.start, b.start) + out.t(b.start + 1, b.start + 1)) / 2;
            const double det = out.t(b.start, b.start) *
                                   out.t(b.start + 1, b.start + 1) -
                               out.t(b.start, b.start + 1) *
                                   out.t(b.start + 1, b.start);
            const double im = std::sqrt(std::max(det - tr * tr, 0.0));
            out.eigenvalues.emplace_back(tr, im);
            out.eigenvalues.emplace_back(tr, -im);
        }
    }

    const double ascale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double orth =
        (out.u.transpose() * out.u - MatrixXd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    const double rec =
        (out.u * out.t * out.u.transpose() - a).cwiseAbs().maxCoeff();
    if (!(orth <= 1e-10))
        fail(Stage::Linalg, "ordered_schur: basis lost orthogonality (" +
                                std::to_string(orth) + ")");
    if (!(rec <= 1e-8 * ascale))
        fail(Stage::Linalg, "ordered_schur: reconstruction residual " +
                                std::to_string(rec) + " exceeds " +
                                std::to_string(1e-8 * ascale));
    for (size_t b = 0; b + 1 < blocks.size(); ++b)
        if (blocks[b].modulus >
            blocks[b + 1].modulus + 1e-12 * std::max(1.0, blocks[b].modulus))
            fail(Stage::Linalg, "ordered_schur: block moduli not sorted");
    return out;
}

VectorXd pinv_row(const VectorXd& v)
{
    const double nrm2 = v.squaredNorm();
    if (!(nrm2 > 1e-280) || !std::isfinite(nrm2))
        fail(Stage::Linalg,
             "pinv_row: zero (or non-finite) vector has no pseudo-inverse");
    return v / nrm2;
}

SvdResult svd(const MatrixXd& m)
{
    SvdResult out;
    if (m.rows() == 0 || m.cols() == 0) {
        out.u = MatrixXd(m.rows(), 0);
        out.v = MatrixXd(m.cols(), 0);
        out.s = VectorXd(0);
        return out;
    }
    if (std::min(m.rows(), m.cols()) <= 16) {
        Eigen::JacobiSVD<MatrixXd> j(m,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = j.matrixU();
        out.s = j.singularValues();
        out.v = j.matrixV();
    } else {
        Eigen::BDCSVD<MatrixXd> b(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = b.matrixU();
        out.s = b.singularValues();
        out.v = b.matrixV();
    }
    return out;
}

} // namespace aakmin
