#include "aakmin/ensemble.hpp"
#include "aakmin/sva.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace aakmin {

namespace {

// Box-Muller over the raw generator: std::normal_distribution is
// implementation-defined, this is not.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    double uniform()
    {
        // 53-bit mantissa in [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }

    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0;
        while (u1 <= 0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    int uniform_int(int lo, int hi) // inclusive
    {
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0;
    bool have_spare_ = false;
};

Wfa draw(Sampler& s, int n, double rho_target)
{
    Wfa w;
    w.trans.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            w.trans(i, j) = s.normal();
    const double rho = spectral_radius(w.trans);
    if (rho > 0)
        w.trans *= rho_target / rho;
    w.alpha.resize(n);
    w.beta.resize(n);
    for (int i = 0; i < n; ++i)
        w.alpha(i) = s.normal();
    for (int i = 0; i < n; ++i)
        w.beta(i) = s.normal();
    return w;
}

// minimal at the rank cut AND far enough from singular that the balancing
// transform exists; the rank cut alone is not enough, since the trailing
// singular numbers can sit below what the cut resolves
bool well_posed(const Wfa& w, int n)
{
    Wfa m = minimize(w);
    if (m.states() != n)
        return false;
    try {
        to_sva(m);
    } catch (const StageError&) {
        return false;
    }
    return true;
}

} // namespace

EnsembleInstance random_instance(std::uint64_t seed, const EnsembleSpec& spec)
{
    Sampler s(seed);
    EnsembleInstance inst;
    const int n = s.uniform_int(spec.min_states, spec.max_states);
    inst.rho_target =
        spec.rho_min + (spec.rho_cap - spec.rho_min) * s.uniform();

    // rejection: resample (same stream) until the draw is minimal and
    // balanceable; then draw k uniformly over the ranks whose sigma_k a
    // double-precision certificate can resolve at 1e-7 relative (rounding
    // noise in the closed-form solve grows steeply as sigma_k approaches
    // the rounding floor of the data scale)
    for (int attempt = 0; attempt < 64; ++attempt) {
        Wfa w = draw(s, n, inst.rho_target);
        Wfa m = minimize(w);
        if (m.states() != n)
            continue;
        SvaModel sv;
        try {
            sv = to_sva(m);
        } catch (const StageError&) {
            continue;
        }
        std::vector<int> usable;
        for (int k = 1; k < n; ++k)
            if (sv.singular_numbers(k) >= 1e-3 * sv.singular_numbers(0))
                usable.push_back(k);
        if (usable.empty())
            continue;
        inst.k = usable[s.uniform_int(0, int(usable.size()) - 1)];
        inst.wfa = w;
        return inst;
    }
    fail(Stage::Core, "random_instance: could not draw a minimal automaton "
                      "for seed " +
                          std::to_string(seed));
}

Wfa random_wfa(std::uint64_t seed, int states, double rho_target)
{
    Sampler s(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Wfa w = draw(s, states, rho_target);
        if (well_posed(w, states))
            return w;
    }
    fail(Stage::Core, "random_wfa: could not draw a minimal automaton");
}

} // namespace aakmin
