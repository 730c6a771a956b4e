#pragma once

#include <string>

#include "aakmin/sva.hpp"

namespace aakmin {

/**
 * Balanced model split at the target singular number.
 *
 * The coordinates of the balanced automaton are permuted so the group of
 * singular numbers equal to sigma_k (its multiplicity is r) occupies the
 * trailing block.  sigma keeps the remaining singular numbers in their
 * descending order; the transition matrix splits accordingly:
 *
 *          [ a11  a12 ]      leading block: n - r states
 *      A = [ a21  a22 ]      trailing block: r states
 *
 * rvec is the diagonal of R = sigma_k^2 I - Sigma^2, which is negative on
 * the first k entries and positive on the rest.  wfa holds the permuted
 * automaton itself, so reassembling the blocks reproduces it exactly.
 */
struct PartitionedSva {
    Wfa wfa;
    VectorXd sigma;
    double sigma_k = 0;
    int k = 0;
    int r = 1;
    MatrixXd a11, a12, a21, a22;
    VectorXd alpha1, beta1;
    VectorXd alpha2, beta2;
    VectorXd rvec;
};

/**
 * The (n - r)-state automaton whose function is the rational part of the
 * optimal error symbol.  Its transition matrix has exactly k eigenvalues
 * inside the unit disc; the stable part extracted from it is the optimal
 * approximation.  degenerate marks the fallback where the only admissible
 * transition matrix is zero (possible when r >= n/2 and the trailing input
 * weights vanish).
 */
struct AuxiliaryWfa {
    Wfa wfa;
    bool degenerate = false;
};

struct ApproxDiagnostics {
    // residuals of the two Gramian equations of the extended error system
    // and of P_e Q_e - sigma_k^2 I, plus the scale they are judged against
    double allpass_r1 = 0;
    double allpass_r2 = 0;
    double allpass_r3 = 0;
    double allpass_scale = 1;

    double unimodularity = 0;
    int unimod_skipped = 0;

    double section_error = 0;
    int section_size = 0;

    double l2 = 0;
    double l2_tail = 0;

    // exact Hankel norm of input minus approximant; optimality means this
    // equals sigma_k
    double hankel_error = 0;
};

struct ApproximationReport {
    Wfa approximant;
    double sigma_k = 0;
    VectorXd singular_numbers; // of the minimized input
    ApproxDiagnostics diagnostics;
    bool degenerate = false;
    std::string recommendation; // set when degenerate
    std::string minimize_warning;
};

struct AakOptions {
    double minimize_tol = 1e-9;
    double mult_tol = 1e-8;       // relative grouping of equal singular numbers
    double alpha2_zero_tol = 1e-10;
    int section_size = 256;
    int unimod_samples = 64;
    int l2_terms = 512;
};

// Requires 0 < k < n and that sigma_(k-1) is strictly separated from
// sigma_k; a cut landing inside a multiplicity group is an error, not a
// silent shift.
PartitionedSva partition(const SvaModel& m, int k, double mult_tol = 1e-8);

/**
 * Closed-form solve of the error-system equations.
 *
 * With the trailing weights alpha2 (and hence beta2) nonzero:
 *
 *     Ahat    = (a11' - a21' pinv(beta2') beta1')^(-1)
 *     betahat = -Ahat a21' pinv(beta2')
 *     alphahat = Ahat' R a12 pinv(alpha2')
 *
 * When |alpha2| <= zero_tol * |alpha| the system becomes underdetermined;
 * any nonzero Ahat with Ahat a21' = 0 is admissible and we take the
 * orthogonal projector onto null(a21).  If that null space is trivial the
 * degenerate Ahat = 0 fallback fires.
 */
AuxiliaryWfa solve_auxiliary(const PartitionedSva& p, double zero_tol = 1e-10);

/**
 * Extracts the stable k-state part of the auxiliary automaton.
 *
 * Ordered Schur form puts the k inside-disc eigenvalues in the leading
 * block; the coupling block is removed by the similarity M = [[I, X], [0,
 * I]] where X solves  t11 X - X t22 + t12 = 0.  The discarded part has all
 * poles outside the closed disc and therefore never changes the function's
 * Hankel matrix.
 */
Wfa block_diagonalize(const AuxiliaryWfa& aux, int k);

// Full pipeline: minimize, balance, partition, solve, extract, verify.
// The report carries sigma_k (the certified spectral-norm error of the
// Hankel approximation) and every oracle residual computed in this run.
ApproximationReport aak_approximation(const Wfa& w, int k,
                                      const AakOptions& opts = {});

} // namespace aakmin
