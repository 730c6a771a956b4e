#pragma once

#include "aakmin/wfa.hpp"

namespace aakmin {

// Reachability and observability Gramians, the solutions of
//   p - A p A' = beta beta'      q - A' q A = alpha alpha'
// Both are positive definite exactly when the automaton is minimal; the
// smallest eigenvalues are kept for diagnostics.
struct Gramians {
    MatrixXd p;
    MatrixXd q;
    double p_min_eig = 0;
    double q_min_eig = 0;
};

// Balanced form in which both Gramians equal diag(singular_numbers); the
// diagonal entries are the Hankel singular numbers of f, in descending
// order.
struct SvaModel {
    Wfa wfa;
    VectorXd singular_numbers;
};

Gramians gramians(const Wfa& w);

// Square-root balancing: Cholesky factors of both Gramians, SVD of the
// cross product, basis change T = Lp V S^(-1/2).  Transform columns are
// sign-pinned (largest entry positive, diagonal preferred) so the output
// basis is deterministic and an already balanced input stays put.
SvaModel to_sva(const Wfa& w);

// Largest Hankel singular number, i.e. the spectral norm of the (infinite)
// Hankel matrix of f.  Minimizes internally, so non-minimal input is fine;
// the zero automaton yields 0.
double exact_hankel_norm(const Wfa& w);

} // namespace aakmin
