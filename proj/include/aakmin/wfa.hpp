#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aakmin/errors.hpp"

namespace aakmin {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/**
 * Weighted finite automaton over a one-letter alphabet.
 *
 * The automaton realizes the sequence
 *
 *     f(t) = alpha' * A^t * beta,   t = 0, 1, 2, ...
 *
 * which is also the entry sequence of the associated Hankel matrix
 * H(i, j) = f(i + j).  All algorithms in this library assume the automaton
 * is irredundant, i.e. the spectral radius of A is below one, so that f is
 * square-summable and the Hankel operator is bounded.
 */
struct Wfa {
    VectorXd alpha;
    MatrixXd trans;
    VectorXd beta;

    int states() const { return static_cast<int>(trans.rows()); }
};

// Direct sum of two automata with the right-hand output negated, so the
// combined automaton realizes f_a - f_b.
struct DifferenceWfa {
    Wfa combined;
    int left_states = 0;
    int right_states = 0;
};

struct MinimizeResult {
    Wfa wfa;
    // Non-empty when a numerical rank decision fell inside the ambiguity
    // band around the cutoff; the text names the offending singular value.
    std::string warning;
};

// Throws Stage::Core when dimensions disagree, the state count is zero, or
// any entry is non-finite.
void validate(const Wfa& w);

// f(t).  Negative t is a contract violation.  Overflow is not trapped here:
// a redundant automaton can produce inf/NaN which downstream consumers must
// reject.
double evaluate(const Wfa& w, long t);

// f(0), f(1), ..., f(count - 1) in one sweep (one mat-vec per step).
std::vector<double> evaluate_prefix(const Wfa& w, long count);

double spectral_radius(const MatrixXd& a);
double spectral_radius(const Wfa& w);

// True when rho(A) < 1 - margin.  The pipeline refuses anything closer to
// the unit circle than the default margin.
bool is_irredundant(const Wfa& w, double margin = 1e-12);

DifferenceWfa difference(const Wfa& a, const Wfa& b);

// Two-pass Krylov restriction: orthonormal basis of span{beta, A beta, ...}
// first, then of the observability span of the restricted automaton.  Rank
// cuts are relative to the largest singular value of the Krylov matrix.
// A zero automaton collapses to one explicit zero state.
MinimizeResult minimize_with_diagnostics(const Wfa& w, double tol = 1e-9);
Wfa minimize(const Wfa& w, double tol = 1e-9);

} // namespace aakmin
