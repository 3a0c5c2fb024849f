#pragma once

#include <cmath>
#include <vector>

#include "graphchain/common.hpp"
#include "graphchain/scenario.hpp"

namespace graphchain {

/// Total potential energy of the configuration at time t, including boundary
/// spring terms and the external-force terms (-f*x and the periodic drive).
/// Bond sums are compensated so values stay trustworthy at large N.
inline double potential_energy(const ScenarioSpec& spec, const Configuration& config, double t) {
    spec.validate();
    validate_configuration(spec, config);
    const double a = spec.natural_spacing;
    const double w1sq = sq(spec.omega1);
    CompensatedSum u;

    switch (spec.variant) {
    case Variant::Circle: {
        for (double g : config.gaps) u.add(0.5 * w1sq * sq(g - a));
        if (spec.forcing.kind == ForcingKind::CircleDrive) {
            auto xs = config.circle_coords();
            u.add(-spec.forcing.f * xs[0]); // zero at the anchor, kept for clarity
            for (double x : xs) u.add(spec.forcing.phi * x);
        }
        return u.value();
    }
    case Variant::FixedRightEnd: {
        const auto& x = config.coords;
        for (int i = 1; i <= spec.n; ++i) u.add(0.5 * w1sq * sq(x[i] - x[i - 1] - a));
        switch (spec.forcing.kind) {
        case ForcingKind::PeriodicOnLast:
            u.add(-x[spec.n] * spec.forcing.c * std::sin(spec.forcing.omega * t));
            return u.value(); // pinned at the origin, no boundary spring
        case ForcingKind::PointOnFirst:
            u.add(-spec.forcing.f * x[0]);
            break;
        case ForcingKind::Uniform:
            for (int i = 0; i < spec.n; ++i) u.add(-spec.forcing.f * x[i]);
            break;
        case ForcingKind::None:
            break;
        default:
            throw invalid_scenario("unsupported forcing for pinned-end chain");
        }
        u.add(0.5 * sq(spec.omega0) * sq(x[0]));
        return u.value();
    }
    case Variant::SpringBothEnds: {
        const auto& x = config.coords;
        for (int i = 1; i <= spec.n; ++i) u.add(0.5 * w1sq * sq(x[i] - x[i - 1] - a));
        u.add(0.5 * sq(spec.omega0) * sq(x[0]));
        u.add(0.5 * sq(spec.omega0) * sq(x[spec.n] - spec.length));
        switch (spec.forcing.kind) {
        case ForcingKind::PointOnFirst:
            u.add(-spec.forcing.f * x[0]);
            break;
        case ForcingKind::OpposedEnds:
            u.add(-spec.forcing.f * x[0]);
            u.add(spec.forcing.f * x[spec.n]);
            break;
        case ForcingKind::Uniform:
            for (int i = 0; i <= spec.n; ++i) u.add(-spec.forcing.f * x[i]);
            break;
        case ForcingKind::None:
            break;
        default:
            throw invalid_scenario("unsupported forcing for spring-ended chain");
        }
        return u.value();
    }
    case Variant::TwoEdge: {
        const auto& xs = config.edge1;
        const auto& ys = config.edge2;
        const double M = spec.scale_m;
        for (int i = 1; i < spec.n1; ++i)
            u.add(0.5 * sq(spec.omega1) * sq(xs[i] - xs[i - 1] - spec.a1 / M));
        for (int i = 1; i < spec.n2; ++i)
            u.add(0.5 * sq(spec.omega2) * sq(ys[i] - ys[i - 1] - spec.a2 / M));
        u.add(0.5 * sq(spec.omega0) * sq(xs[0] + ys[0] - spec.a0 / M));
        return u.value();
    }
    }
    throw invalid_scenario("unknown variant");
}

/// -grad U per free coordinate, ordered as in configuration_from_free.
/// Pinned coordinates are excluded from the output index set.
inline std::vector<double> force_vector(const ScenarioSpec& spec, const Configuration& config,
                                        double t) {
    spec.validate();
    validate_configuration(spec, config);
    const double a = spec.natural_spacing;
    const double w1sq = sq(spec.omega1);
    std::vector<double> f;
    f.reserve(free_coordinate_count(spec));

    switch (spec.variant) {
    case Variant::Circle: {
        const auto& g = config.gaps;
        // Particle k feels bond tensions g_{k+1} and g_k (indices mod N).
        for (int k = 1; k < spec.n; ++k) {
            double force = w1sq * ((g[k] - a) - (g[k - 1] - a));
            if (spec.forcing.kind == ForcingKind::CircleDrive) force -= spec.forcing.phi;
            f.push_back(force);
        }
        return f;
    }
    case Variant::FixedRightEnd: {
        const auto& x = config.coords;
        auto bond = [&](int i) { return w1sq * (x[i] - x[i - 1] - a); };
        if (spec.pinned_at_origin()) {
            for (int k = 1; k < spec.n; ++k) f.push_back(bond(k + 1) - bond(k));
            f.push_back(-bond(spec.n) + spec.forcing.c * std::sin(spec.forcing.omega * t));
            return f;
        }
        {
            double force = -sq(spec.omega0) * x[0] + bond(1);
            if (spec.forcing.kind == ForcingKind::PointOnFirst ||
                spec.forcing.kind == ForcingKind::Uniform)
                force += spec.forcing.f;
            f.push_back(force);
        }
        for (int k = 1; k < spec.n; ++k) {
            double force = bond(k + 1) - bond(k);
            if (spec.forcing.kind == ForcingKind::Uniform) force += spec.forcing.f;
            f.push_back(force);
        }
        return f;
    }
    case Variant::SpringBothEnds: {
        const auto& x = config.coords;
        auto bond = [&](int i) { return w1sq * (x[i] - x[i - 1] - a); };
        {
            double force = -sq(spec.omega0) * x[0] + bond(1);
            if (spec.forcing.kind != ForcingKind::None) force += spec.forcing.f;
            f.push_back(force);
        }
        for (int k = 1; k < spec.n; ++k) {
            double force = bond(k + 1) - bond(k);
            if (spec.forcing.kind == ForcingKind::Uniform) force += spec.forcing.f;
            f.push_back(force);
        }
        {
            double force = -sq(spec.omega0) * (x[spec.n] - spec.length) - bond(spec.n);
            if (spec.forcing.kind == ForcingKind::OpposedEnds) force -= spec.forcing.f;
            if (spec.forcing.kind == ForcingKind::Uniform) force += spec.forcing.f;
            f.push_back(force);
        }
        return f;
    }
    case Variant::TwoEdge: {
        const auto& xs = config.edge1;
        const auto& ys = config.edge2;
        const double M = spec.scale_m;
        const double w2sq = sq(spec.omega2);
        const double junction = sq(spec.omega0) * (xs[0] + ys[0] - spec.a0 / M);
        auto bx = [&](int i) { return w1sq * (xs[i] - xs[i - 1] - spec.a1 / M); };
        auto by = [&](int i) { return w2sq * (ys[i] - ys[i - 1] - spec.a2 / M); };
        f.push_back(bx(1) - junction);
        for (int k = 1; k < spec.n1 - 1; ++k) f.push_back(bx(k + 1) - bx(k));
        f.push_back(by(1) - junction);
        for (int k = 1; k < spec.n2 - 1; ++k) f.push_back(by(k + 1) - by(k));
        return f;
    }
    }
    throw invalid_scenario("unknown variant");
}

} // namespace graphchain
