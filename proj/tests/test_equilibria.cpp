#include <gtest/gtest.h>

#include <cmath>

#include "graphchain/chain_model.hpp"
#include "graphchain/equilibria.hpp"
#include "oracles.hpp"

using namespace graphchain;

namespace {

double force_residual(const ScenarioSpec& spec, const Configuration& cfg) {
    return oracles::max_abs(force_vector(spec, cfg, 0.0));
}

double residual_scale(const ScenarioSpec& spec, double f) {
    return std::max({1.0, std::abs(f), sq(spec.omega0), sq(spec.omega1) * spec.length});
}

} // namespace

TEST(CircleEquilibrium, ZeroForceGivesUniformGaps) {
    auto res = circle_equilibrium(5, 10.0, 1.0, 0.0);
    EXPECT_EQ(res.regime, Regime::Increasing);
    for (double g : res.config.gaps) EXPECT_DOUBLE_EQ(g, 2.0);
    EXPECT_DOUBLE_EQ(res.metadata.at("epsilon1"), 0.0);
}

TEST(CircleEquilibrium, HandValuesForThreeParticles) {
    // N=3, omega=1, f=1, L=10: eps = (-3, 0, 3), gaps (3, 10/3, 11/3), phi=1/3.
    auto res = circle_equilibrium(3, 10.0, 1.0, 1.0);
    EXPECT_EQ(res.regime, Regime::Increasing);
    ASSERT_EQ(res.config.gaps.size(), 3u);
    EXPECT_NEAR(res.config.gaps[0], 3.0, 1e-14);
    EXPECT_NEAR(res.config.gaps[1], 10.0 / 3.0, 1e-14);
    EXPECT_NEAR(res.config.gaps[2], 11.0 / 3.0, 1e-14);
    EXPECT_NEAR(res.metadata.at("epsilon1"), -3.0, 1e-14);
    EXPECT_NEAR(res.metadata.at("phi"), 1.0 / 3.0, 1e-15);

    auto spec = ScenarioSpec::circle(3, 10.0, 1.0, Forcing::circle_drive(1.0, 1.0 / 3.0));
    EXPECT_LT(force_residual(spec, res.config), 1e-12);
}

TEST(CircleEquilibrium, ExistenceConditionFlips) {
    // f/(2 w^2 L) vs 1/(N(1-1/N)): f=4 -> 0.2 < 0.5 exists; f=12 -> 0.6 fails.
    EXPECT_EQ(circle_equilibrium(3, 10.0, 1.0, 4.0).regime, Regime::Increasing);
    EXPECT_EQ(circle_equilibrium(3, 10.0, 1.0, 12.0).regime, Regime::NoEquilibrium);
}

TEST(CircleEquilibrium, EpsilonProfileSumsToZero) {
    for (int n : {3, 10, 57}) {
        auto res = circle_equilibrium(n, 7.0, 1.3, 0.02);
        if (res.regime == Regime::NoEquilibrium) continue;
        const double eps1 = res.metadata.at("epsilon1");
        CompensatedSum s;
        for (double g : res.config.gaps) s.add((g - 7.0 / n) * n * double(n));
        EXPECT_LE(std::abs(s.value()), 1e-12 * n * std::max(1.0, std::abs(eps1)));
    }
}

TEST(CircleEquilibrium, RejectsTinyRings) {
    EXPECT_THROW(circle_equilibrium(1, 10.0, 1.0, 0.0), Error);
}

TEST(FixedEndEquilibrium, UnforcedUniformLattice) {
    auto res = fixed_end_equilibrium(4, 4.0, 1.0, 0.9, 1.1, 0.0);
    EXPECT_EQ(res.regime, Regime::Increasing);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(res.config.coords[k], k, 1e-12);
}

TEST(FixedEndEquilibrium, HandValues) {
    auto res = fixed_end_equilibrium(2, 2.0, 1.0, 1.0, 1.0, 1.0);
    EXPECT_EQ(res.regime, Regime::Increasing);
    EXPECT_NEAR(res.config.coords[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(res.config.coords[1], 4.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(res.config.coords[2], 2.0);
}

TEST(FixedEndEquilibrium, CollapseAtThresholdClampBeyond) {
    const double threshold = 1.0 * 2.0 + 1.0 * 1.0; // w0^2 L + w1^2 a
    auto at = fixed_end_equilibrium(2, 2.0, 1.0, 1.0, 1.0, threshold);
    EXPECT_EQ(at.regime, Regime::Collapsed);
    for (double x : at.config.coords) EXPECT_DOUBLE_EQ(x, 2.0);
    auto beyond = fixed_end_equilibrium(2, 2.0, 1.0, 1.0, 1.0,
                                        std::nextafter(threshold, 1e9));
    EXPECT_EQ(beyond.regime, Regime::Clamped);
    for (double x : beyond.config.coords) EXPECT_DOUBLE_EQ(x, 2.0);
    auto below = fixed_end_equilibrium(2, 2.0, 1.0, 1.0, 1.0,
                                       std::nextafter(threshold, -1e9));
    EXPECT_EQ(below.regime, Regime::Increasing);
}

TEST(SpringEndsEquilibrium, CollapsedCommonCoordinate) {
    // At f = w0^2 L + 2 w1^2 a all particles sit at
    // L + w1^2 a (N + 2 w1^2/w0^2) / (2 w1^2 + N w0^2).
    const int n = 4;
    const double L = 5, a = 1, w0 = 0.8, w1 = 1.1;
    const double f = sq(w0) * L + 2 * sq(w1) * a;
    auto res = spring_ends_equilibrium(n, L, a, w0, w1, f);
    EXPECT_EQ(res.regime, Regime::Collapsed);
    const double expected = L + sq(w1) * a * (n + 2 * sq(w1) / sq(w0)) / (2 * sq(w1) + n * sq(w0));
    for (double x : res.config.coords) EXPECT_NEAR(x, expected, 1e-12);
}

TEST(SpringEndsEquilibrium, RegimeFlipsAcrossThreshold) {
    auto thr = spring_ends_equilibrium(3, 4.0, 1.0, 1.0, 1.0, 0.0).metadata.at("regime_threshold");
    EXPECT_EQ(spring_ends_equilibrium(3, 4.0, 1.0, 1.0, 1.0, std::nextafter(thr, -1e9)).regime,
              Regime::Increasing);
    EXPECT_EQ(spring_ends_equilibrium(3, 4.0, 1.0, 1.0, 1.0, thr).regime, Regime::Collapsed);
    EXPECT_EQ(spring_ends_equilibrium(3, 4.0, 1.0, 1.0, 1.0, std::nextafter(thr, 1e9)).regime,
              Regime::Decreasing);
}

TEST(SpringEndsEquilibrium, RequiresBoundarySpring) {
    EXPECT_THROW(spring_ends_equilibrium(3, 4.0, 1.0, 0.0, 1.0, 0.1), Error);
}

TEST(OpposedForcesEquilibrium, CollapseAtHalfThreshold) {
    const double f = (1.0 * 4.0 + 2.0 * 1.0) / 2.0;
    auto res = opposed_forces_equilibrium(3, 4.0, 1.0, 1.0, 1.0, f);
    EXPECT_EQ(res.regime, Regime::Collapsed);
    double first = res.config.coords[0];
    for (double x : res.config.coords) EXPECT_NEAR(x, first, 1e-12);
}

TEST(OpposedForcesEquilibrium, UnforcedUniform) {
    auto res = opposed_forces_equilibrium(4, 4.0, 1.0, 0.7, 1.3, 0.0);
    EXPECT_EQ(res.regime, Regime::Increasing);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(res.config.coords[k], k, 1e-12);
}

TEST(UniformForceFixedEnd, ScaledWindowMatchesScaledInequality) {
    // Under a = a0/N, f = f0/N, w1^2 = W1^2 N the admissible window for f0
    // approaches -2 W1^2 (L - a0)/(1 + 1/N) <= f0 < 2 W1^2 (w0^2 L + a0 W1^2)
    //            / (2 W1^2 + w0^2 (1 - 1/N)).
    const double L = 2.0, a0 = 1.0, W1sq = 1.5, w0 = 0.9;
    for (int n : {64, 256, 1024}) {
        auto res = uniform_force_fixed_end(n, L, a0 / n, w0, std::sqrt(W1sq * n), 0.0);
        const double lo_f0 = res.ordering_window.lo * n;
        const double hi_f0 = res.ordering_window.hi * n;
        const double lo_expect = -2 * W1sq * (L - a0) / (1.0 + 1.0 / n);
        const double hi_expect =
            2 * W1sq * (sq(w0) * L + a0 * W1sq) / (2 * W1sq + sq(w0) * (1.0 - 1.0 / n));
        EXPECT_NEAR(lo_f0, lo_expect, 1e-10 * std::abs(lo_expect));
        EXPECT_NEAR(hi_f0, hi_expect, 1e-10 * std::abs(hi_expect));
    }
}

TEST(UniformForceFixedEnd, AdmissibleForcesRemainOrderedWithZeroResidual) {
    oracles::ParamRng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = rng.uniform_int(2, 40);
        const double L = rng.uniform(2.0, 9.0);
        const double a = rng.uniform(0.2, L / n);
        const double w0 = rng.uniform(0.0, 1.4);
        const double w1 = rng.uniform(0.5, 1.8);
        auto window = uniform_force_fixed_end(n, L, a, w0, w1, 0.0).ordering_window;
        const double f = window.lo + rng.uniform(0.05, 0.95) * (window.hi - window.lo);
        auto res = uniform_force_fixed_end(n, L, a, w0, w1, f);
        EXPECT_EQ(res.regime, Regime::Increasing);
        for (std::size_t k = 1; k < res.config.coords.size(); ++k)
            EXPECT_GT(res.config.coords[k], res.config.coords[k - 1]);
        auto spec = ScenarioSpec::fixed_right_end(n, L, a, w0, w1, Forcing::uniform(f));
        EXPECT_LT(force_residual(spec, res.config), 1e-9 * residual_scale(spec, f));
    }
}

TEST(UniformForceSpringEnds, GapVanishesAtStrictOrderEdge) {
    const int n = 5;
    const double L = 6, a = 1, w0 = 0.9, w1 = 1.2;
    auto probe = uniform_force_spring_ends(n, L, a, w0, w1, 0.0);
    const double A = probe.metadata.at("regime_threshold");
    auto at_edge = uniform_force_spring_ends(n, L, a, w0, w1, A);
    // The last gap closes at the +A edge.
    const auto& x = at_edge.config.coords;
    EXPECT_NEAR(x[n] - x[n - 1], 0.0, 1e-12);
    EXPECT_NE(at_edge.regime, Regime::Increasing);
    auto inside = uniform_force_spring_ends(n, L, a, w0, w1, std::nextafter(A, -1e9));
    EXPECT_EQ(inside.regime, Regime::Increasing);
}

TEST(UniformForceSpringEnds, UnforcedUniform) {
    auto res = uniform_force_spring_ends(4, 4.0, 1.0, 0.7, 1.3, 0.0);
    EXPECT_EQ(res.regime, Regime::Increasing);
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(res.config.coords[k], k, 1e-12);
}

TEST(TwoEdgeEquilibrium, SymmetricEdgesGiveEqualGaps) {
    auto spec = ScenarioSpec::two_edge(6, 6, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 12.0);
    auto res = two_edge_equilibrium(spec);
    EXPECT_EQ(res.regime, Regime::Increasing);
    EXPECT_DOUBLE_EQ(res.metadata.at("gap_edge1"), res.metadata.at("gap_edge2"));
    for (std::size_t i = 0; i < res.config.edge1.size(); ++i)
        EXPECT_DOUBLE_EQ(res.config.edge1[i], res.config.edge2[i]);
}

TEST(TwoEdgeEquilibrium, AsymptoticStretchMatchesHandValue) {
    // M=10, N=10, c=1/2, b=1, unit a's and omegas, L1=L2=1: the large-M
    // stretch value is 0.9/1.1.
    auto spec = ScenarioSpec::two_edge(5, 5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 10.0);
    auto res = two_edge_equilibrium(spec);
    EXPECT_NEAR(res.metadata.at("r0_asymptotic"), 0.9 / 1.1, 1e-15);
    // The exact junction solve balances forces; the asymptotic value does not
    // at this M, which is why both are reported.
    EXPECT_LT(force_residual(spec, res.config), 1e-12);
    const double r0 = res.metadata.at("r0");
    EXPECT_NEAR(r0, 10.0 * (1.1 / 9.0), 1e-12);
}

TEST(TwoEdgeEquilibrium, EnergyMetadataMatchesPotential) {
    auto spec = ScenarioSpec::two_edge(7, 5, 1.3, 0.9, 1.0, 0.8, 1.1, 1.0, 1.2, 0.9, 16.0);
    auto res = two_edge_equilibrium(spec);
    ASSERT_EQ(res.regime, Regime::Increasing);
    EXPECT_NEAR(res.metadata.at("energy"), potential_energy(spec, res.config, 0.0), 1e-12);
}

TEST(TwoEdgeEquilibrium, AsymptoticEnergyConvergesAtLargeM) {
    // The reported closed-form energy approaches the exact minimum as M grows.
    for (int scale : {40, 160, 640}) {
        auto spec = ScenarioSpec::two_edge(scale / 2, scale / 2, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
                                           1.0, 1.0, double(scale));
        auto res = two_edge_equilibrium(spec);
        const double exact = res.metadata.at("energy");
        const double asym = res.metadata.at("energy_asymptotic");
        EXPECT_NEAR(asym / exact, 1.0, 10.0 / scale);
    }
}

TEST(TwoEdgeEquilibrium, NonexistenceWhenJunctionPullsTooHard) {
    // Long natural spacings against short edges drive the edge-1 gap negative.
    auto spec = ScenarioSpec::two_edge(4, 4, 0.1, 0.1, 1.0, 0.5, 4.0, 1.0, 1.0, 1.0, 4.0);
    auto res = two_edge_equilibrium(spec);
    EXPECT_EQ(res.regime, Regime::NoEquilibrium);
}

TEST(MinimizeQuadratic, MatchesEveryClosedFormSolver) {
    oracles::ParamRng rng(42);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int pick = trial % 7;
        ScenarioSpec spec;
        EquilibriumResult res;
        switch (pick) {
        case 0: {
            const int n = rng.uniform_int(2, 30);
            const double L = rng.uniform(3.0, 12.0), w = rng.uniform(0.5, 2.0);
            const double bound = 2 * sq(w) * L / (n * (1.0 - 1.0 / n));
            const double f = rng.uniform(0.0, 0.8 * bound);
            spec = ScenarioSpec::circle(n, L, w, Forcing::circle_drive(f, f / n));
            res = circle_equilibrium(n, L, w, f);
            break;
        }
        case 1: {
            const int n = rng.uniform_int(1, 30);
            const double L = rng.uniform(2.0, 9.0), a = rng.uniform(0.0, 1.5 * L / n);
            const double w0 = rng.uniform(0.0, 1.5), w1 = rng.uniform(0.4, 2.0);
            const double f = rng.uniform(-1.0, 0.95 * (sq(w0) * L + sq(w1) * a));
            spec = ScenarioSpec::fixed_right_end(n, L, a, w0, w1, Forcing::point_on_first(f));
            res = fixed_end_equilibrium(n, L, a, w0, w1, f);
            break;
        }
        case 2: {
            const int n = rng.uniform_int(1, 30);
            const double L = rng.uniform(2.0, 9.0), a = rng.uniform(0.0, 1.5 * L / n);
            const double w0 = rng.uniform(0.3, 1.5), w1 = rng.uniform(0.4, 2.0);
            const double f = rng.uniform(-1.0, 1.0);
            spec = ScenarioSpec::spring_both_ends(n, L, a, w0, w1, Forcing::point_on_first(f));
            res = spring_ends_equilibrium(n, L, a, w0, w1, f);
            break;
        }
        case 3: {
            const int n = rng.uniform_int(1, 30);
            const double L = rng.uniform(2.0, 9.0), a = rng.uniform(0.0, 1.5 * L / n);
            const double w0 = rng.uniform(0.3, 1.5), w1 = rng.uniform(0.4, 2.0);
            const double f = rng.uniform(-1.0, 1.0);
            spec = ScenarioSpec::spring_both_ends(n, L, a, w0, w1, Forcing::opposed_ends(f));
            res = opposed_forces_equilibrium(n, L, a, w0, w1, f);
            break;
        }
        case 4: {
            const int n = rng.uniform_int(2, 30);
            const double L = rng.uniform(2.0, 9.0), a = rng.uniform(0.1, L / n);
            const double w0 = rng.uniform(0.0, 1.5), w1 = rng.uniform(0.4, 2.0);
            auto window = uniform_force_fixed_end(n, L, a, w0, w1, 0.0).ordering_window;
            const double f = window.lo + rng.uniform(0.1, 0.9) * (window.hi - window.lo);
            spec = ScenarioSpec::fixed_right_end(n, L, a, w0, w1, Forcing::uniform(f));
            res = uniform_force_fixed_end(n, L, a, w0, w1, f);
            break;
        }
        case 5: {
            const int n = rng.uniform_int(2, 30);
            const double L = rng.uniform(2.0, 9.0), a = rng.uniform(0.1, L / n);
            const double w0 = rng.uniform(0.3, 1.5), w1 = rng.uniform(0.4, 2.0);
            const double A = uniform_force_spring_ends(n, L, a, w0, w1, 0.0)
                                 .metadata.at("regime_threshold");
            const double f = rng.uniform(-0.9 * A, 0.9 * A);
            spec = ScenarioSpec::spring_both_ends(n, L, a, w0, w1, Forcing::uniform(f));
            res = uniform_force_spring_ends(n, L, a, w0, w1, f);
            break;
        }
        default: {
            const int n1 = rng.uniform_int(2, 15), n2 = rng.uniform_int(2, 15);
            spec = ScenarioSpec::two_edge(n1, n2, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                          rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5),
                                          rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5),
                                          rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5),
                                          rng.uniform(4.0, 24.0));
            res = two_edge_equilibrium(spec);
            break;
        }
        }
        if (res.regime == Regime::Clamped || res.regime == Regime::NoEquilibrium) continue;
        Configuration direct = minimize_quadratic(spec);
        auto u_closed = free_coordinates(spec, res.config);
        auto u_direct = free_coordinates(spec, direct);
        EXPECT_LT(oracles::max_abs_diff(u_closed, u_direct), 1e-10)
            << "solver " << pick << " trial " << trial;
        ++checked;
    }
    EXPECT_GE(checked, 40);
}

TEST(MinimizeQuadratic, ScalarCaseAndSingularSystem) {
    auto spec = ScenarioSpec::fixed_right_end(1, 2.0, 0.5, 0.8, 1.1, Forcing::point_on_first(0.3));
    auto direct = minimize_quadratic(spec);
    auto res = fixed_end_equilibrium(1, 2.0, 0.5, 0.8, 1.1, 0.3);
    EXPECT_NEAR(direct.coords[0], res.config.coords[0], 1e-14);

    auto singular = ScenarioSpec::spring_both_ends(2, 2.0, 1.0, 0.0, 0.0);
    EXPECT_THROW(minimize_quadratic(singular), Error);
}

TEST(MinimizeQuadratic, DisagreesInClampedRegimeByDesign) {
    // Beyond the clamp threshold the unconstrained minimizer leaves [0, L];
    // the closed form clamps instead, so the two routes intentionally differ.
    const double f = 10.0;
    auto spec = ScenarioSpec::fixed_right_end(3, 2.0, 0.5, 1.0, 1.0, Forcing::point_on_first(f));
    auto res = fixed_end_equilibrium(3, 2.0, 0.5, 1.0, 1.0, f);
    EXPECT_EQ(res.regime, Regime::Clamped);
    auto direct = minimize_quadratic(spec);
    EXPECT_GT(direct.coords[0], spec.length);
}

TEST(OrderingWindows, ReportedEndpointsHonorPaperInclusivity) {
    auto th0 = fixed_end_equilibrium(4, 5.0, 1.0, 0.9, 1.1, 0.0);
    EXPECT_TRUE(th0.ordering_window.lo_closed);
    EXPECT_FALSE(th0.ordering_window.hi_closed);
    auto th1 = spring_ends_equilibrium(4, 5.0, 1.0, 0.9, 1.1, 0.0);
    EXPECT_TRUE(th1.ordering_window.lo_closed);
    EXPECT_TRUE(th1.ordering_window.hi_closed);
    auto th4 = uniform_force_spring_ends(4, 5.0, 1.0, 0.9, 1.1, 0.0);
    EXPECT_TRUE(th4.ordering_window.lo_closed);
    EXPECT_TRUE(th4.ordering_window.hi_closed);
    EXPECT_NEAR(th4.ordering_window.lo, -2 * th4.ordering_window.hi, 1e-15);
}
