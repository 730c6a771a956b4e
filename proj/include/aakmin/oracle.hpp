#pragma once

#include <complex>

#include "aakmin/aak.hpp"

namespace aakmin {

// Finite N x N slice of the Hankel matrix: entries(i, j) = f(i + j).
struct HankelSection {
    Eigen::MatrixXd entries;
    Wfa source;
};

struct AllpassResidual {
    double r1 = 0; // reachability-side Gramian equation
    double r2 = 0; // observability-side Gramian equation
    double r3 = 0; // P_e Q_e - sigma_k^2 I
    double scale = 1;
};

struct UnimodResult {
    double max_deviation = 0;
    int skipped = 0; // samples dropped for a vanishing denominator
};

struct L2Result {
    double partial = 0;    // sqrt of the summed squares over the window
    double tail_bound = 0; // geometric envelope of the remainder
};

HankelSection hankel_section(const Wfa& w, int n);

// Best spectral-norm rank-k approximation of a general matrix (no Hankel
// constraint): zero the trailing singular values.  When the cut splits a
// group of equal singular values the tied block is rotated first so each
// discarded direction has zero overlap with the leading coordinate axes,
// which makes the result deterministic.
Eigen::MatrixXd truncated_svd_approx(const Eigen::MatrixXd& m, int k);

// Largest singular value of the N-section of the difference automaton.
double section_spectral_error(const Wfa& a, const Wfa& b, int n);

L2Result l2_error(const Wfa& a, const Wfa& b, int terms);

// alpha' (z I - A)^(-1) beta, the strictly proper rational transform of f.
std::complex<double> symbol_eval(const Wfa& w, std::complex<double> z);

// Samples the ratio that represents the normalized error symbol on the
// unit circle; at the optimum its modulus is one everywhere.  Returns the
// worst deviation of |ratio| from 1 over the sample set.
UnimodResult unimodularity_residual(const SvaModel& m, int k, int samples = 64,
                                    double mult_tol = 1e-8);

// Checks that the extended error system built from the partition and the
// auxiliary automaton is allpass: both Gramian equations hold with the
// closed-form P_e, Q_e and their product is sigma_k^2 I.
AllpassResidual allpass_verify(const PartitionedSva& p, const AuxiliaryWfa& aux);

} // namespace aakmin
