#pragma once

#include <cstdint>

#include "aakmin/wfa.hpp"

namespace aakmin {

// Seeded random instances for bench and stress tests.  Entries of A are
// standard normal rescaled to a spectral-radius target drawn uniformly
// from [rho_min, rho_cap]; alpha and beta are standard normal.  Draws that
// are not numerically minimal or not balanceable are rejected and
// resampled from the same stream, so each seed is deterministic (the
// normal sampler is hand-rolled Box-Muller over mt19937_64 to stay
// reproducible across standard libraries).  k is drawn uniformly over the
// ranks with sigma_k at least 1e-3 of sigma_0, the range where rounding
// noise in the construction stays well under a 1e-7 relative certificate.
struct EnsembleSpec {
    int min_states = 2;
    int max_states = 6;
    double rho_min = 0.3;
    double rho_cap = 0.9;
};

struct EnsembleInstance {
    Wfa wfa;
    int k = 0; // uniform over the certifiable ranks of the draw
    double rho_target = 0;
};

EnsembleInstance random_instance(std::uint64_t seed, const EnsembleSpec& spec = {});

// Fixed-size random automaton, minimal and balanceable but with no floor
// on the singular-number spread.
Wfa random_wfa(std::uint64_t seed, int states, double rho_target);

} // namespace aakmin
