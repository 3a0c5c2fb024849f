// Test-only oracles: finite differences, dense eigensolves and adaptive ODE
// integration. These deliberately avoid the closed-form paths they check.
#pragma once

#include <random>
#include <vector>

#include "graphchain/chain_model.hpp"
#include "graphchain/scenario.hpp"

namespace oracles {

/// Central finite differences of the potential with respect to the free
/// coordinates; the independent route to force_vector.
inline std::vector<double> gradient_fd(const graphchain::ScenarioSpec& spec,
                                       const graphchain::Configuration& config, double t,
                                       double h = 1e-6) {
    auto u = graphchain::free_coordinates(spec, config);
    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto up = u, um = u;
        up[i] += h;
        um[i] -= h;
        const double fp = graphchain::potential_energy(
            spec, graphchain::configuration_from_free(spec, up), t);
        const double fm = graphchain::potential_energy(
            spec, graphchain::configuration_from_free(spec, um), t);
        g[i] = (fp - fm) / (2 * h);
    }
    return g;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Deterministic parameter sampler for the randomized solver cross-checks.
struct ParamRng {
    std::mt19937_64 rng;
    explicit ParamRng(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
};

} // namespace oracles
