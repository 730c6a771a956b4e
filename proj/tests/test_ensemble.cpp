#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aakmin/ensemble.hpp"

using namespace aakmin;

TEST_CASE("instances are deterministic in the seed")
{
    EnsembleSpec spec;
    EnsembleInstance a = random_instance(7, spec);
    EnsembleInstance b = random_instance(7, spec);
    CHECK(a.k == b.k);
    CHECK((a.wfa.trans.array() == b.wfa.trans.array()).all());
    CHECK((a.wfa.alpha.array() == b.wfa.alpha.array()).all());
    CHECK((a.wfa.beta.array() == b.wfa.beta.array()).all());

    EnsembleInstance c = random_instance(8, spec);
    CHECK((a.wfa.states() != c.wfa.states() ||
           (a.wfa.trans - c.wfa.trans).cwiseAbs().maxCoeff() > 0));
}

TEST_CASE("instances respect the requested envelope")
{
    EnsembleSpec spec;
    for (unsigned seed = 1; seed <= 25; ++seed) {
        EnsembleInstance inst = random_instance(seed, spec);
        const int n = inst.wfa.states();
        CHECK(n >= spec.min_states);
        CHECK(n <= spec.max_states);
        CHECK(inst.k >= 1);
        CHECK(inst.k < n);
        CHECK(spectral_radius(inst.wfa) <= spec.rho_cap + 1e-9);
        CHECK(spectral_radius(inst.wfa) >= spec.rho_min - 1e-9);
        CHECK(minimize(inst.wfa).states() == n);
    }
}

TEST_CASE("fixed-size generator hits the spectral-radius target")
{
    Wfa w = random_wfa(3, 10, 0.7);
    CHECK(w.states() == 10);
    CHECK(spectral_radius(w) == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(minimize(w).states() == 10);
}
