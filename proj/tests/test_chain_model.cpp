#include <gtest/gtest.h>

#include "graphchain/chain_model.hpp"
#include "graphchain/equilibria.hpp"
#include "oracles.hpp"

using namespace graphchain;

TEST(PotentialEnergy, CircleUniformGapsHasZeroInteraction) {
    auto spec = ScenarioSpec::circle(5, 10.0, 1.3);
    Configuration cfg = Configuration::circle_gaps(std::vector<double>(5, 2.0));
    EXPECT_DOUBLE_EQ(potential_energy(spec, cfg, 0.0), 0.0);
}

TEST(PotentialEnergy, SingleParticlePinnedChain) {
    // N=1, L=1, a=0, unit springs, no force, x0 = 0: U = (1/2)(1-0-0)^2.
    auto spec = ScenarioSpec::fixed_right_end(1, 1.0, 0.0, 1.0, 1.0);
    Configuration cfg = Configuration::chain({0.0, 1.0});
    EXPECT_DOUBLE_EQ(potential_energy(spec, cfg, 0.0), 0.5);
}

TEST(PotentialEnergy, ClosedFormEquilibriumMatchesDirectMinimum) {
    auto res = fixed_end_equilibrium(4, 5.0, 1.0, 0.7, 1.1, 0.4);
    auto spec = ScenarioSpec::fixed_right_end(4, 5.0, 1.0, 0.7, 1.1, Forcing::point_on_first(0.4));
    Configuration direct = minimize_quadratic(spec);
    const double u_closed = potential_energy(spec, res.config, 0.0);
    const double u_direct = potential_energy(spec, direct, 0.0);
    EXPECT_NEAR(u_closed, u_direct, 1e-10);
}

TEST(PotentialEnergy, TimeShiftInvariantWithoutDrive) {
    auto spec = ScenarioSpec::spring_both_ends(3, 4.0, 1.0, 0.8, 1.0, Forcing::uniform(0.3));
    Configuration cfg = Configuration::chain({0.1, 1.2, 2.1, 3.4});
    EXPECT_DOUBLE_EQ(potential_energy(spec, cfg, 0.0), potential_energy(spec, cfg, 17.5));
}

TEST(PotentialEnergy, CircleCyclicGapRelabelingInvariant) {
    auto spec = ScenarioSpec::circle(6, 12.0, 0.9);
    std::vector<double> gaps = {1.5, 2.5, 2.0, 1.0, 3.0, 2.0};
    const double u0 = potential_energy(spec, Configuration::circle_gaps(gaps), 0.0);
    for (int shift = 1; shift < 6; ++shift) {
        std::vector<double> rot(6);
        for (int i = 0; i < 6; ++i) rot[i] = gaps[(i + shift) % 6];
        EXPECT_NEAR(potential_energy(spec, Configuration::circle_gaps(rot), 0.0), u0, 1e-12);
    }
}

TEST(PotentialEnergy, DimensionMismatchThrows) {
    auto spec = ScenarioSpec::fixed_right_end(3, 4.0, 1.0, 1.0, 1.0);
    Configuration bad = Configuration::chain({0.0, 1.0, 4.0});
    EXPECT_THROW(potential_energy(spec, bad, 0.0), Error);
    EXPECT_THROW(force_vector(spec, bad, 0.0), Error);
}

TEST(ForceVector, HandBalancedPinnedChain) {
    // N=2, L=2, a=1, unit springs, f=1: equilibrium at x0=2/3, x1=4/3.
    auto spec = ScenarioSpec::fixed_right_end(2, 2.0, 1.0, 1.0, 1.0, Forcing::point_on_first(1.0));
    Configuration cfg = Configuration::chain({2.0 / 3.0, 4.0 / 3.0, 2.0});
    auto f = force_vector(spec, cfg, 0.0);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_NEAR(f[0], 0.0, 1e-12);
    EXPECT_NEAR(f[1], 0.0, 1e-12);

    auto fd = oracles::gradient_fd(spec, cfg, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(f[i], -fd[i], 1e-7);
}

TEST(ForceVector, UnstretchedChainFeelsNothing) {
    auto spec = ScenarioSpec::spring_both_ends(3, 3.0, 1.0, 1.2, 0.9);
    Configuration cfg = Configuration::chain({0.0, 1.0, 2.0, 3.0});
    for (double f : force_vector(spec, cfg, 0.0)) EXPECT_DOUBLE_EQ(f, 0.0);
}

TEST(ForceVector, ZeroAtEveryClosedFormEquilibrium) {
    struct Case {
        ScenarioSpec spec;
        Configuration config;
    };
    std::vector<Case> cases;
    {
        auto r = circle_equilibrium(6, 9.0, 1.1, 0.4);
        cases.push_back({ScenarioSpec::circle(6, 9.0, 1.1, Forcing::circle_drive(0.4, 0.4 / 6)),
                         r.config});
    }
    {
        auto r = fixed_end_equilibrium(5, 6.0, 1.0, 0.8, 1.2, 0.9);
        cases.push_back({ScenarioSpec::fixed_right_end(5, 6.0, 1.0, 0.8, 1.2,
                                                       Forcing::point_on_first(0.9)),
                         r.config});
    }
    {
        auto r = spring_ends_equilibrium(5, 6.0, 1.0, 0.8, 1.2, 0.9);
        cases.push_back({ScenarioSpec::spring_both_ends(5, 6.0, 1.0, 0.8, 1.2,
                                                        Forcing::point_on_first(0.9)),
                         r.config});
    }
    {
        auto r = opposed_forces_equilibrium(5, 6.0, 1.0, 0.8, 1.2, 0.6);
        cases.push_back({ScenarioSpec::spring_both_ends(5, 6.0, 1.0, 0.8, 1.2,
                                                        Forcing::opposed_ends(0.6)),
                         r.config});
    }
    {
        auto r = uniform_force_fixed_end(5, 6.0, 1.0, 0.8, 1.2, 0.05);
        cases.push_back({ScenarioSpec::fixed_right_end(5, 6.0, 1.0, 0.8, 1.2,
                                                       Forcing::uniform(0.05)),
                         r.config});
    }
    {
        auto r = uniform_force_spring_ends(5, 6.0, 1.0, 0.8, 1.2, 0.05);
        cases.push_back({ScenarioSpec::spring_both_ends(5, 6.0, 1.0, 0.8, 1.2,
                                                        Forcing::uniform(0.05)),
                         r.config});
    }
    {
        auto spec = ScenarioSpec::two_edge(5, 6, 1.0, 1.2, 1.0, 1.0, 0.9, 1.0, 1.1, 0.9, 10.0);
        auto r = two_edge_equilibrium(spec);
        cases.push_back({spec, r.config});
    }
    for (const auto& c : cases) {
        auto f = force_vector(c.spec, c.config, 0.0);
        EXPECT_LT(oracles::max_abs(f), 1e-9);
    }
}

TEST(ForceVector, MatchesFiniteDifferencesOnRandomConfigurations) {
    oracles::ParamRng rng(20260809);
    for (int trial = 0; trial < 40; ++trial) {
        const int pick = rng.uniform_int(0, 3);
        ScenarioSpec spec;
        Configuration cfg;
        const int n = rng.uniform_int(2, 7);
        const double L = rng.uniform(2.0, 8.0);
        switch (pick) {
        case 0: {
            spec = ScenarioSpec::circle(n, L, rng.uniform(0.5, 2.0),
                                        Forcing::circle_drive(rng.uniform(0.0, 0.5),
                                                              rng.uniform(0.0, 0.2)));
            std::vector<double> u(n - 1);
            double x = 0;
            for (auto& v : u) v = (x += rng.uniform(0.05, L / n));
            cfg = configuration_from_free(spec, u);
            break;
        }
        case 1: {
            spec = ScenarioSpec::fixed_right_end(n, L, L / n, rng.uniform(0.0, 1.5),
                                                 rng.uniform(0.5, 2.0),
                                                 Forcing::uniform(rng.uniform(-0.3, 0.3)));
            std::vector<double> u(n);
            for (auto& v : u) v = rng.uniform(0.0, L);
            cfg = configuration_from_free(spec, u);
            break;
        }
        case 2: {
            spec = ScenarioSpec::spring_both_ends(n, L, L / n, rng.uniform(0.3, 1.5),
                                                  rng.uniform(0.5, 2.0),
                                                  Forcing::opposed_ends(rng.uniform(-0.4, 0.4)));
            std::vector<double> u(n + 1);
            for (auto& v : u) v = rng.uniform(0.0, L);
            cfg = configuration_from_free(spec, u);
            break;
        }
        default: {
            spec = ScenarioSpec::driven_chain(n, 1.0, rng.uniform(0.5, 1.5), 0.7, 3.1);
            std::vector<double> u(n);
            for (int k = 0; k < n; ++k) u[k] = (k + 1) * 1.0 + rng.uniform(-0.2, 0.2);
            cfg = configuration_from_free(spec, u);
            break;
        }
        }
        const double t = rng.uniform(0.0, 5.0);
        auto f = force_vector(spec, cfg, t);
        auto fd = oracles::gradient_fd(spec, cfg, t);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double scale = std::max(1.0, std::abs(f[i]));
            EXPECT_NEAR(f[i], -fd[i], 1e-6 * scale);
        }
    }
}

TEST(ForceVector, DrivenChainTracksTheDriveTerm) {
    auto spec = ScenarioSpec::driven_chain(3, 1.0, 1.0, 0.5, 2.0);
    Configuration cfg = Configuration::chain({0.0, 1.0, 2.0, 3.0});
    const double t = 0.4;
    auto f = force_vector(spec, cfg, t);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_DOUBLE_EQ(f[0], 0.0);
    EXPECT_DOUBLE_EQ(f[1], 0.0);
    EXPECT_DOUBLE_EQ(f[2], 0.5 * std::sin(2.0 * t));
}
