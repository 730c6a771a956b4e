#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace aakmin {

/**
 * Real Schur decomposition a = u * t * u' with the diagonal blocks ordered
 * by nondecreasing eigenvalue modulus.
 *
 * t is quasi upper triangular: 1x1 blocks carry real eigenvalues, 2x2
 * blocks carry complex conjugate pairs (which share a modulus and are never
 * split).  eigenvalues lists the spectrum in block order.
 */
struct OrderedSchur {
    Eigen::MatrixXd u;
    Eigen::MatrixXd t;
    std::vector<std::complex<double>> eigenvalues;
    std::vector<int> block_sizes;
};

// x - a x a' = m, for rho(a) < 1 and symmetric m.  Solved exactly via the
// vectorized n^2 system for small n and via complex Schur reduction above
// that; both paths end in the same residual gate of 1e-10 * max(1, |m|).
Eigen::MatrixXd solve_stein(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m);

// Factor l with l l' = sum_{t>=0} a^t (b b') (a')^t, i.e. the solution of
// x - a x a' = b b', computed by doubling directly on the factor.  Keeps
// full accuracy in the small singular values of l, which squaring into x
// would destroy.  rho(a) < 1 required.
Eigen::MatrixXd stein_factor(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// p x - x q + c = 0 with disjoint spectra (Bartels-Stewart on Schur
// factors).  Nearly common eigenvalues are reported, not solved through.
Eigen::MatrixXd solve_sylvester(const Eigen::MatrixXd& p,
                                const Eigen::MatrixXd& q,
                                const Eigen::MatrixXd& c);

// Eigen's RealSchur followed by a bubble pass of orthogonal swaps of
// adjacent diagonal blocks, each swap built from a small Sylvester solve.
OrderedSchur ordered_schur(const Eigen::MatrixXd& a);

// Moore-Penrose pseudo-inverse of the row vector v', i.e. v / (v'v).
// Errors on (numerically) zero input.
Eigen::VectorXd pinv_row(const Eigen::VectorXd& v);

struct SvdResult {
    Eigen::MatrixXd u;
    Eigen::VectorXd s; // descending
    Eigen::MatrixXd v;
};

SvdResult svd(const Eigen::MatrixXd& m);

} // namespace aakmin
