#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "graphchain/chain_model.hpp"
#include "graphchain/common.hpp"
#include "graphchain/scenario.hpp"
#include "graphchain/tridiagonal.hpp"

namespace graphchain {

/// Ordering outcome of a closed-form equilibrium.
///
/// Increasing     strictly increasing coordinates (positive gaps)
/// Collapsed      all coordinates coincide
/// Decreasing     strictly decreasing coordinates
/// Clamped        chain pressed against the pinned end, all particles at L
/// NoEquilibrium  no equilibrium satisfies the admissible ordering
enum class Regime { Increasing, Collapsed, Decreasing, Clamped, NoEquilibrium };

inline const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Increasing: return "Increasing";
    case Regime::Collapsed: return "Collapsed";
    case Regime::Decreasing: return "Decreasing";
    case Regime::Clamped: return "Clamped";
    case Regime::NoEquilibrium: return "NoEquilibrium";
    }
    return "?";
}

struct EquilibriumResult {
    Configuration config;
    Regime regime = Regime::NoEquilibrium;
    Interval ordering_window; // admissible-force interval for the natural order
    std::map<std::string, double> metadata;
};

namespace detail {

// Classifies a k-dependent gap profile once the threshold comparison has
// already ruled out Increasing. Never returns Increasing, so the regime flip
// at the computed threshold stays an exact IEEE comparison.
inline Regime classify_non_increasing(const std::vector<double>& gaps) {
    bool all_neg = true, all_zero = true;
    for (double g : gaps) {
        if (!(g < 0)) all_neg = false;
        if (g != 0) all_zero = false;
    }
    if (all_zero) return Regime::Collapsed;
    if (all_neg) return Regime::Decreasing;
    return Regime::NoEquilibrium;
}

inline std::vector<double> uniform_gap_coords(int n, double x0, double gap) {
    std::vector<double> xs(n + 1);
    for (int k = 0; k <= n; ++k) xs[k] = x0 + k * gap;
    return xs;
}

} // namespace detail

/// Ring of n particles, drive f on particle 0, counterforce f/n on everyone.
/// Gap deviations eps_k (gap_k = L/n + eps_k/n^2) follow an arithmetic
/// progression with increment f*n/omega^2; the profile exists only while the
/// smallest gap stays positive.
inline EquilibriumResult circle_equilibrium(int n, double length, double omega1, double f) {
    ScenarioSpec spec = ScenarioSpec::circle(n, length, omega1,
                                             Forcing::circle_drive(f, f / n));
    spec.validate();
    const double w2 = sq(omega1);
    const double eps1 = -f * n * (n - 1) / (2.0 * w2);
    const double increment = f * n / w2;

    EquilibriumResult res;
    const double bound = 2.0 * w2 * length / (n * (1.0 - 1.0 / n));
    res.ordering_window = Interval{-bound, bound, false, false};
    res.metadata["epsilon1"] = eps1;
    res.metadata["phi"] = f / n;
    res.metadata["regime_threshold"] = bound;

    const bool exists = (f >= 0) ? (f < bound) : (-f < bound);
    std::vector<double> gaps(n);
    for (int k = 1; k <= n; ++k) {
        double eps = eps1 + (k - 1) * increment;
        gaps[k - 1] = length / n + eps / double(n) / double(n);
    }
    res.config = Configuration::circle_gaps(std::move(gaps));
    if (!exists) {
        res.regime = Regime::NoEquilibrium;
        return res;
    }
    res.regime = Regime::Increasing;
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Chain 0..n pinned at x_n = L, boundary spring omega0 on particle 0,
/// constant force f on particle 0. Below the collapse threshold the gaps are
/// uniform; at it the chain collapses onto L; above it the particles press
/// against the pinned end (clamped).
inline EquilibriumResult fixed_end_equilibrium(int n, double length, double a, double omega0,
                                               double omega1, double f) {
    ScenarioSpec spec = ScenarioSpec::fixed_right_end(n, length, a, omega0, omega1,
                                                      Forcing::point_on_first(f));
    spec.validate();
    if (!(omega1 > 0)) throw invalid_scenario("omega1 must be positive");
    const double w0 = sq(omega0), w1 = sq(omega1);
    const double threshold = w0 * length + w1 * a;

    EquilibriumResult res;
    res.ordering_window = Interval{w1 * (a - length / n), threshold, true, false};
    res.metadata["regime_threshold"] = threshold;

    if (f < threshold) {
        const double x0 = (w1 * (length - n * a) + n * f) / (w1 + w0 * n);
        const double gap = (w0 * length + w1 * a - f) / (w1 + w0 * n);
        auto xs = detail::uniform_gap_coords(n, x0, gap);
        xs[n] = length;
        res.config = Configuration::chain(std::move(xs));
        res.regime = Regime::Increasing;
        res.metadata["x0"] = x0;
        res.metadata["gap"] = gap;
    } else {
        res.config = Configuration::chain(std::vector<double>(n + 1, length));
        res.regime = (f == threshold) ? Regime::Collapsed : Regime::Clamped;
        res.metadata["x0"] = length;
        res.metadata["gap"] = 0.0;
    }
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Chain 0..n with boundary springs omega0 at both ends, force f on particle 0.
inline EquilibriumResult spring_ends_equilibrium(int n, double length, double a, double omega0,
                                                 double omega1, double f) {
    if (!(omega0 > 0)) throw invalid_scenario("spring-ended chain needs omega0 > 0");
    if (!(omega1 > 0)) throw invalid_scenario("omega1 must be positive");
    ScenarioSpec spec = ScenarioSpec::spring_both_ends(n, length, a, omega0, omega1,
                                                       Forcing::point_on_first(f));
    spec.validate();
    const double w0 = sq(omega0), w1 = sq(omega1);
    const double denom = 2 * w1 + n * w0;
    const double threshold = w0 * length + 2 * w1 * a;

    const double x0 = (w1 * (length - n * a) + n * f + w1 / w0 * f) / denom;
    const double gap = (threshold - f) / denom;

    EquilibriumResult res;
    res.config = Configuration::chain(detail::uniform_gap_coords(n, x0, gap));
    res.regime = (f < threshold)   ? Regime::Increasing
                 : (f == threshold) ? Regime::Collapsed
                                    : Regime::Decreasing;
    res.ordering_window = Interval{-w1 * (length - a * n) / (n + w1 / w0),
                                   w0 * (length - n * a), true, true};
    res.metadata["x0"] = x0;
    res.metadata["gap"] = gap;
    res.metadata["regime_threshold"] = threshold;
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Spring-ended chain with +f on particle 0 and -f on particle n.
inline EquilibriumResult opposed_forces_equilibrium(int n, double length, double a, double omega0,
                                                    double omega1, double f) {
    if (!(omega0 > 0)) throw invalid_scenario("spring-ended chain needs omega0 > 0");
    if (!(omega1 > 0)) throw invalid_scenario("omega1 must be positive");
    ScenarioSpec spec = ScenarioSpec::spring_both_ends(n, length, a, omega0, omega1,
                                                       Forcing::opposed_ends(f));
    spec.validate();
    const double w0 = sq(omega0), w1 = sq(omega1);
    const double denom = 2 * w1 + n * w0;
    const double threshold = (w0 * length + 2 * w1 * a) / 2.0;

    const double x0 = (w1 * (length - n * a) + n * f) / denom;
    const double gap = (w0 * length + 2 * w1 * a - 2 * f) / denom;

    EquilibriumResult res;
    res.config = Configuration::chain(detail::uniform_gap_coords(n, x0, gap));
    res.regime = (f < threshold)   ? Regime::Increasing
                 : (f == threshold) ? Regime::Collapsed
                                    : Regime::Decreasing;
    res.ordering_window = Interval{w1 * (a - length / n), threshold, true, false};
    res.metadata["x0"] = x0;
    res.metadata["gap"] = gap;
    res.metadata["regime_threshold"] = threshold;
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Pinned-end chain with the constant field f on particles 0..n-1. Gaps
/// shrink linearly with k, so the strict order binds at k = n for f > 0 and
/// at k = 1 for f < 0.
inline EquilibriumResult uniform_force_fixed_end(int n, double length, double a, double omega0,
                                                 double omega1, double f) {
    if (!(omega1 > 0)) throw invalid_scenario("omega1 must be positive");
    ScenarioSpec spec = ScenarioSpec::fixed_right_end(n, length, a, omega0, omega1,
                                                      Forcing::uniform(f));
    spec.validate();
    const double w0 = sq(omega0), w1 = sq(omega1);
    const double lift = length + n * (n + 1) * f / (2 * w1); // L + N(N+1)f/(2 w1^2)
    const double x0 = w1 * (lift - n * a) / (w1 + w0 * n);
    const double gap_base = (w0 * lift + a * w1) / (w1 + w0 * n);

    const double upper = 2 * w1 * (w0 * length + a * w1) / (n * (2 * w1 + w0 * (n - 1)));
    const double lo_denom = w0 * n * (n - 1) - 2 * w1;
    const double lower = (lo_denom > 0) ? -2 * w1 * (w0 * length + a * w1) / lo_denom
                                        : -std::numeric_limits<double>::infinity();

    std::vector<double> gaps(n);
    for (int k = 1; k <= n; ++k) gaps[k - 1] = gap_base - f * k / w1;
    std::vector<double> xs(n + 1);
    xs[0] = x0;
    for (int k = 1; k <= n; ++k) xs[k] = xs[k - 1] + gaps[k - 1];
    xs[n] = length;

    EquilibriumResult res;
    res.config = Configuration::chain(std::move(xs));
    res.regime = (lower < f && f < upper) ? Regime::Increasing
                                          : detail::classify_non_increasing(gaps);
    res.ordering_window = Interval{-2 * w1 * (length - a * n) / (n * (n + 1.0)), upper,
                                   true, false};
    res.metadata["x0"] = x0;
    res.metadata["gap"] = gaps[0];
    res.metadata["regime_threshold"] = upper;
    res.metadata["regime_threshold_low"] = lower;
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Spring-ended chain with the constant field f on every particle 0..n.
inline EquilibriumResult uniform_force_spring_ends(int n, double length, double a, double omega0,
                                                   double omega1, double f) {
    if (!(omega0 > 0)) throw invalid_scenario("spring-ended chain needs omega0 > 0");
    if (!(omega1 > 0)) throw invalid_scenario("omega1 must be positive");
    if (n < 2) throw invalid_scenario("uniform-force spring chain needs n >= 2");
    ScenarioSpec spec = ScenarioSpec::spring_both_ends(n, length, a, omega0, omega1,
                                                       Forcing::uniform(f));
    spec.validate();
    const double w0 = sq(omega0), w1 = sq(omega1);
    const double denom = 2 * w1 + n * w0;
    const double lift = length + n * (n + 1) * f / (2 * w1);
    const double x0 = (w1 * (lift - n * a) + w1 / w0 * f * (n + 1)) / denom;
    const double gap_base = (w0 * lift + f * (n + 1) + 2 * w1 * a) / denom;

    const double strict_bound = 2 * w1 * (w0 * length + 2 * a * w1) / ((n - 1) * denom);

    std::vector<double> gaps(n);
    for (int k = 1; k <= n; ++k) gaps[k - 1] = gap_base - f * k / w1;
    std::vector<double> xs(n + 1);
    xs[0] = x0;
    for (int k = 1; k <= n; ++k) xs[k] = xs[k - 1] + gaps[k - 1];

    EquilibriumResult res;
    res.config = Configuration::chain(std::move(xs));
    res.regime = (std::abs(f) < strict_bound) ? Regime::Increasing
                                              : detail::classify_non_increasing(gaps);
    const double boxed = w1 * w0 * (length - n * a) / (denom * (n + 1.0));
    res.ordering_window = Interval{-2 * boxed, boxed, true, true};
    res.metadata["x0"] = x0;
    res.metadata["gap"] = gaps[0];
    res.metadata["regime_threshold"] = strict_bound;
    res.metadata["box_halfwidth"] = boxed;
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Two-edge star graph. The stationarity system reduces to one scalar for the
/// through-vertex stretch R0 = x1 + y1 - a0/M; gaps on each edge are uniform.
/// r0 = M*R0 is reported together with its large-M limit value
/// (the closed form with N_i - 1 replaced by c N and (1-c) N), which the
/// uniform-gap expressions approach as M grows.
inline EquilibriumResult two_edge_equilibrium(const ScenarioSpec& spec) {
    spec.validate();
    if (spec.variant != Variant::TwoEdge) throw invalid_scenario("two-edge spec required");
    const double w0 = sq(spec.omega0), w1 = sq(spec.omega1), w2 = sq(spec.omega2);
    const double M = spec.scale_m;
    const int n1 = spec.n1, n2 = spec.n2;

    const double numer = spec.length1 + spec.length2 -
                         ((n1 - 1) * spec.a1 + (n2 - 1) * spec.a2 + spec.a0) / M;
    const double r0 = M * numer / (1.0 + w0 * ((n1 - 1) / w1 + (n2 - 1) / w2));

    const double b = spec.density_b(), c = spec.edge_fraction();
    const double mix = w1 == 0 ? 0 : c / w1 + (1 - c) / w2;
    const double numer_asym = spec.length1 + spec.length2 - spec.a1 * c * b -
                              spec.a2 * (1 - c) * b - spec.a0 / M;
    const double r0_asym = numer_asym / (1.0 / M + b * w0 * mix);

    const double gap1 = (w0 * r0 / w1 + spec.a1) / M;
    const double gap2 = (w0 * r0 / w2 + spec.a2) / M;

    EquilibriumResult res;
    res.metadata["r0"] = r0;
    res.metadata["r0_asymptotic"] = r0_asym;
    res.metadata["gap_edge1"] = gap1;
    res.metadata["gap_edge2"] = gap2;
    res.metadata["energy_asymptotic"] =
        w0 * sq(numer_asym) / (2 * b * M * (w0 * mix + 1.0 / (b * M)));

    std::vector<double> xs(n1), ys(n2);
    for (int k = 0; k < n1; ++k) xs[k] = spec.length1 - (n1 - 1 - k) * gap1;
    for (int k = 0; k < n2; ++k) ys[k] = spec.length2 - (n2 - 1 - k) * gap2;
    xs[n1 - 1] = spec.length1;
    ys[n2 - 1] = spec.length2;
    res.config = Configuration::two_edge(std::move(xs), std::move(ys));

    const bool exists = (w0 * r0 / w1 + spec.a1 > 0) && (w0 * r0 / w2 + spec.a2 > 0);
    if (!exists) {
        res.regime = Regime::NoEquilibrium;
        return res;
    }
    res.regime = Regime::Increasing;
    res.metadata["energy"] = potential_energy(spec, res.config, 0.0);
    return res;
}

/// Independent route to the same minima: assembles the stationarity system
/// grad U = 0 over the free coordinates and solves it directly. The Hessian
/// is tridiagonal in the free ordering (the two-edge junction couples the
/// innermost pair with a +omega0^2 off-diagonal entry).
inline Configuration minimize_quadratic(const ScenarioSpec& spec) {
    spec.validate();
    if (spec.forcing.time_dependent())
        throw invalid_scenario("minimize_quadratic needs time-independent forcing");

    const std::size_t nfree = free_coordinate_count(spec);
    std::vector<double> diag(nfree), off(nfree ? nfree - 1 : 0);
    const double w0 = sq(spec.omega0), w1 = sq(spec.omega1);

    switch (spec.variant) {
    case Variant::Circle:
        for (auto& d : diag) d = 2 * w1;
        for (auto& e : off) e = -w1;
        break;
    case Variant::FixedRightEnd:
        if (spec.pinned_at_origin()) {
            for (auto& d : diag) d = 2 * w1;
            diag[nfree - 1] = w1;
        } else {
            diag[0] = w0 + w1;
            for (std::size_t i = 1; i < nfree; ++i) diag[i] = 2 * w1;
        }
        for (auto& e : off) e = -w1;
        break;
    case Variant::SpringBothEnds:
        diag[0] = w0 + w1;
        for (std::size_t i = 1; i + 1 < nfree; ++i) diag[i] = 2 * w1;
        diag[nfree - 1] = w0 + w1;
        for (auto& e : off) e = -w1;
        break;
    case Variant::TwoEdge: {
        const double w2 = sq(spec.omega2);
        const std::size_t m1 = spec.n1 - 1; // free coordinates on edge 1
        // Edge 1 reversed ordering keeps the junction pair adjacent.
        for (std::size_t i = 0; i < m1; ++i) diag[i] = (i + 1 < m1) ? 2 * w1 : w1 + w0;
        for (std::size_t i = m1; i < nfree; ++i) diag[i] = (i == m1) ? w2 + w0 : 2 * w2;
        for (std::size_t i = 0; i + 1 < m1; ++i) off[i] = -w1;
        if (m1 >= 1 && nfree > m1) off[m1 - 1] = w0; // x1 / y1 coupling
        for (std::size_t i = m1; i + 1 < nfree; ++i) off[i] = -w2;
        break;
    }
    }

    // Right-hand side from the exact gradient at the zero free configuration.
    Configuration base = configuration_from_free(spec, std::vector<double>(nfree, 0.0));
    std::vector<double> b = force_vector(spec, base, 0.0);

    if (spec.variant == Variant::TwoEdge) {
        // Map between the natural free ordering and the reversed edge-1 layout.
        const std::size_t m1 = spec.n1 - 1;
        std::vector<double> br(nfree);
        for (std::size_t i = 0; i < m1; ++i) br[i] = b[m1 - 1 - i];
        for (std::size_t i = m1; i < nfree; ++i) br[i] = b[i];
        auto ur = solve_tridiagonal(diag, off, br);
        std::vector<double> u(nfree);
        for (std::size_t i = 0; i < m1; ++i) u[m1 - 1 - i] = ur[i];
        for (std::size_t i = m1; i < nfree; ++i) u[i] = ur[i];
        return configuration_from_free(spec, u);
    }

    auto u = solve_tridiagonal(diag, off, b);
    return configuration_from_free(spec, u);
}

} // namespace graphchain
