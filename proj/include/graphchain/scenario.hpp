#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graphchain/common.hpp"

namespace graphchain {

/// Graph/boundary topology of a scenario.
///
/// Circle          N particles 0..N-1 on a ring of circumference L.
/// FixedRightEnd   particles 0..N on the line; x_N is pinned at L, particle 0
///                 is tied to the origin by a boundary spring omega0.
///                 With PeriodicOnLast forcing the pinned particle is x_0 = 0
///                 instead and the free end N carries the periodic drive.
/// SpringBothEnds  particles 0..N; boundary springs omega0 tie x_0 to 0 and
///                 x_N to L, all particles free.
/// TwoEdge         star graph with two edges of lengths L1, L2 joined at a
///                 vertex; the outermost particle of each edge is pinned at
///                 the far end, the innermost pair couples through the vertex.
enum class Variant { Circle, FixedRightEnd, SpringBothEnds, TwoEdge };

enum class ForcingKind {
    None,
    PointOnFirst,   ///< constant force f on particle 0
    OpposedEnds,    ///< +f on particle 0, -f on particle N
    Uniform,        ///< constant f on every particle that carries the field term
    PeriodicOnLast, ///< c*sin(omega*t) on the last particle of the pinned-end chain
    CircleDrive     ///< f on circle particle 0 plus counterforce -phi on every particle
};

struct Forcing {
    ForcingKind kind = ForcingKind::None;
    double f = 0.0;     // constant amplitude (PointOnFirst/OpposedEnds/Uniform/CircleDrive)
    double c = 0.0;     // periodic drive amplitude
    double omega = 0.0; // periodic drive frequency
    double phi = 0.0;   // circle counterforce per particle

    static Forcing none() { return {}; }
    static Forcing point_on_first(double f) { return {ForcingKind::PointOnFirst, f, 0, 0, 0}; }
    static Forcing opposed_ends(double f) { return {ForcingKind::OpposedEnds, f, 0, 0, 0}; }
    static Forcing uniform(double f) { return {ForcingKind::Uniform, f, 0, 0, 0}; }
    static Forcing periodic_on_last(double c, double omega) {
        return {ForcingKind::PeriodicOnLast, 0, c, omega, 0};
    }
    static Forcing circle_drive(double f, double phi) {
        return {ForcingKind::CircleDrive, f, 0, 0, phi};
    }

    bool time_dependent() const { return kind == ForcingKind::PeriodicOnLast; }
};

/// Which graph/boundary/forcing variant plus all physical parameters.
/// For chain variants n is the index of the last particle (particles 0..n);
/// for Circle n is the particle count.
struct ScenarioSpec {
    Variant variant = Variant::FixedRightEnd;
    int n = 1;
    double length = 1.0;          // L (unused by the PeriodicOnLast chain)
    double natural_spacing = 0.0; // a
    double omega0 = 0.0;
    double omega1 = 1.0;
    Forcing forcing;

    // TwoEdge only.
    int n1 = 0, n2 = 0;
    double length1 = 0.0, length2 = 0.0;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
    double omega2 = 0.0;
    double scale_m = 1.0; // M; natural gaps are a_j / M

    double edge_fraction() const { return double(n1) / double(n1 + n2); } // c
    double density_b() const { return double(n1 + n2) / scale_m; }        // b = N/M

    static ScenarioSpec circle(int n, double L, double omega1, Forcing forcing = Forcing::none()) {
        ScenarioSpec s;
        s.variant = Variant::Circle;
        s.n = n;
        s.length = L;
        s.natural_spacing = L / n;
        s.omega1 = omega1;
        s.forcing = forcing;
        return s;
    }

    static ScenarioSpec fixed_right_end(int n, double L, double a, double omega0, double omega1,
                                        Forcing forcing = Forcing::none()) {
        ScenarioSpec s;
        s.variant = Variant::FixedRightEnd;
        s.n = n;
        s.length = L;
        s.natural_spacing = a;
        s.omega0 = omega0;
        s.omega1 = omega1;
        s.forcing = forcing;
        return s;
    }

    static ScenarioSpec spring_both_ends(int n, double L, double a, double omega0, double omega1,
                                         Forcing forcing = Forcing::none()) {
        ScenarioSpec s;
        s.variant = Variant::SpringBothEnds;
        s.n = n;
        s.length = L;
        s.natural_spacing = a;
        s.omega0 = omega0;
        s.omega1 = omega1;
        s.forcing = forcing;
        return s;
    }

    /// Pinned-left-end chain driven by c*sin(omega*t) on particle n.
    static ScenarioSpec driven_chain(int n, double a, double omega1, double c, double omega) {
        ScenarioSpec s;
        s.variant = Variant::FixedRightEnd;
        s.n = n;
        s.length = n * a;
        s.natural_spacing = a;
        s.omega0 = 0.0;
        s.omega1 = omega1;
        s.forcing = Forcing::periodic_on_last(c, omega);
        return s;
    }

    static ScenarioSpec two_edge(int n1, int n2, double L1, double L2, double a0, double a1,
                                 double a2, double omega0, double omega1, double omega2,
                                 double M) {
        ScenarioSpec s;
        s.variant = Variant::TwoEdge;
        s.n = n1 + n2;
        s.n1 = n1;
        s.n2 = n2;
        s.length1 = L1;
        s.length2 = L2;
        s.length = L1 + L2;
        s.a0 = a0;
        s.a1 = a1;
        s.a2 = a2;
        s.omega0 = omega0;
        s.omega1 = omega1;
        s.omega2 = omega2;
        s.scale_m = M;
        return s;
    }

    /// Chain with a pinned particle at coordinate 0 rather than L.
    bool pinned_at_origin() const {
        return variant == Variant::FixedRightEnd && forcing.kind == ForcingKind::PeriodicOnLast;
    }

    void validate() const {
        if (!(omega0 >= 0) || !(omega1 >= 0))
            throw invalid_scenario("frequencies must be nonnegative");
        switch (variant) {
        case Variant::Circle:
            if (n < 2) throw invalid_scenario("circle needs at least two particles");
            if (!(length > 0)) throw invalid_scenario("circle length must be positive");
            if (!(omega1 > 0)) throw invalid_scenario("circle interaction frequency must be positive");
            if (forcing.kind != ForcingKind::None && forcing.kind != ForcingKind::CircleDrive)
                throw invalid_scenario("unsupported forcing for circle");
            break;
        case Variant::FixedRightEnd:
        case Variant::SpringBothEnds:
            if (n < 1) throw invalid_scenario("chain needs n >= 1");
            if (!(length > 0)) throw invalid_scenario("chain length must be positive");
            if (forcing.kind == ForcingKind::CircleDrive)
                throw invalid_scenario("circle drive is only valid on the circle");
            if (forcing.kind == ForcingKind::PeriodicOnLast && variant != Variant::FixedRightEnd)
                throw invalid_scenario("periodic drive needs the pinned-end chain");
            break;
        case Variant::TwoEdge:
            if (n1 < 2 || n2 < 2) throw invalid_scenario("two-edge graph needs n1, n2 >= 2");
            if (!(length1 > 0) || !(length2 > 0))
                throw invalid_scenario("edge lengths must be positive");
            if (!(omega0 > 0) || !(omega1 > 0) || !(omega2 > 0))
                throw invalid_scenario("two-edge frequencies must be positive");
            if (!(a0 > 0) || !(a1 > 0) || !(a2 > 0))
                throw invalid_scenario("two-edge spacings must be positive");
            if (!(scale_m >= 1)) throw invalid_scenario("two-edge scale M must be >= 1");
            if (forcing.kind != ForcingKind::None)
                throw invalid_scenario("two-edge graph supports no external forcing");
            break;
        }
    }
};

/// Particle coordinates on the graph.
///
/// Chain variants store x_0..x_n in `coords`. The circle stores the gap
/// sequence gap_1..gap_N (gap_k = x_k - x_{k-1}, gap_N wraps around, the sum
/// is the circumference); coordinates are reconstructed from the x_0 = 0
/// anchor. TwoEdge stores the two per-edge sequences x_1..x_{N1}, y_1..y_{N2}
/// measured from the junction vertex.
struct Configuration {
    std::vector<double> coords;
    std::vector<double> gaps;
    std::vector<double> edge1, edge2;

    static Configuration chain(std::vector<double> xs) {
        Configuration c;
        c.coords = std::move(xs);
        return c;
    }
    static Configuration circle_gaps(std::vector<double> gs) {
        Configuration c;
        c.gaps = std::move(gs);
        return c;
    }
    static Configuration two_edge(std::vector<double> xs, std::vector<double> ys) {
        Configuration c;
        c.edge1 = std::move(xs);
        c.edge2 = std::move(ys);
        return c;
    }

    /// Coordinates x_0..x_{N-1} of the circle from the x_0 = 0 anchor.
    std::vector<double> circle_coords() const {
        std::vector<double> xs(gaps.size());
        xs[0] = 0.0;
        for (std::size_t k = 1; k < gaps.size(); ++k) xs[k] = xs[k - 1] + gaps[k - 1];
        return xs;
    }
};

/// Dimension and fixed-coordinate checks; throws on mismatch.
inline void validate_configuration(const ScenarioSpec& spec, const Configuration& config) {
    auto fail = [](const std::string& msg) { throw dimension_mismatch(msg); };
    switch (spec.variant) {
    case Variant::Circle:
        if (config.gaps.size() != std::size_t(spec.n)) fail("circle gap count != n");
        break;
    case Variant::FixedRightEnd:
        if (config.coords.size() != std::size_t(spec.n) + 1) fail("chain coordinate count != n+1");
        if (spec.pinned_at_origin()) {
            if (config.coords.front() != 0.0) fail("pinned particle x_0 must sit at 0");
        } else if (config.coords.back() != spec.length) {
            fail("pinned particle x_n must sit at L");
        }
        break;
    case Variant::SpringBothEnds:
        if (config.coords.size() != std::size_t(spec.n) + 1) fail("chain coordinate count != n+1");
        break;
    case Variant::TwoEdge:
        if (config.edge1.size() != std::size_t(spec.n1)) fail("edge-1 coordinate count != n1");
        if (config.edge2.size() != std::size_t(spec.n2)) fail("edge-2 coordinate count != n2");
        if (config.edge1.back() != spec.length1) fail("edge-1 endpoint must sit at L1");
        if (config.edge2.back() != spec.length2) fail("edge-2 endpoint must sit at L2");
        break;
    }
}

/// Number of free (unpinned) coordinates of the scenario.
inline std::size_t free_coordinate_count(const ScenarioSpec& spec) {
    switch (spec.variant) {
    case Variant::Circle: return std::size_t(spec.n) - 1; // x_0 anchors the phase
    case Variant::FixedRightEnd: return std::size_t(spec.n);
    case Variant::SpringBothEnds: return std::size_t(spec.n) + 1;
    case Variant::TwoEdge: return std::size_t(spec.n1 - 1) + std::size_t(spec.n2 - 1);
    }
    return 0;
}

/// Assembles a full Configuration from the free coordinates, inserting the
/// pinned values. Free ordering: chains ascending index; circle x_1..x_{N-1};
/// two-edge x_1..x_{N1-1} then y_1..y_{N2-1}.
inline Configuration configuration_from_free(const ScenarioSpec& spec,
                                             const std::vector<double>& u) {
    if (u.size() != free_coordinate_count(spec))
        throw dimension_mismatch("free coordinate count mismatch");
    switch (spec.variant) {
    case Variant::Circle: {
        std::vector<double> gaps(spec.n);
        double prev = 0.0;
        for (int k = 1; k < spec.n; ++k) {
            gaps[k - 1] = u[k - 1] - prev;
            prev = u[k - 1];
        }
        gaps[spec.n - 1] = spec.length - prev;
        return Configuration::circle_gaps(std::move(gaps));
    }
    case Variant::FixedRightEnd: {
        std::vector<double> xs(spec.n + 1);
        if (spec.pinned_at_origin()) {
            xs[0] = 0.0;
            for (int k = 1; k <= spec.n; ++k) xs[k] = u[k - 1];
        } else {
            for (int k = 0; k < spec.n; ++k) xs[k] = u[k];
            xs[spec.n] = spec.length;
        }
        return Configuration::chain(std::move(xs));
    }
    case Variant::SpringBothEnds:
        return Configuration::chain(u);
    case Variant::TwoEdge: {
        std::vector<double> xs(spec.n1), ys(spec.n2);
        for (int k = 0; k < spec.n1 - 1; ++k) xs[k] = u[k];
        xs[spec.n1 - 1] = spec.length1;
        for (int k = 0; k < spec.n2 - 1; ++k) ys[k] = u[spec.n1 - 1 + k];
        ys[spec.n2 - 1] = spec.length2;
        return Configuration::two_edge(std::move(xs), std::move(ys));
    }
    }
    throw invalid_scenario("unknown variant");
}

/// Extracts the free coordinates (inverse of configuration_from_free).
inline std::vector<double> free_coordinates(const ScenarioSpec& spec, const Configuration& config) {
    validate_configuration(spec, config);
    std::vector<double> u;
    u.reserve(free_coordinate_count(spec));
    switch (spec.variant) {
    case Variant::Circle: {
        auto xs = config.circle_coords();
        u.assign(xs.begin() + 1, xs.end());
        break;
    }
    case Variant::FixedRightEnd:
        if (spec.pinned_at_origin())
            u.assign(config.coords.begin() + 1, config.coords.end());
        else
            u.assign(config.coords.begin(), config.coords.end() - 1);
        break;
    case Variant::SpringBothEnds:
        u = config.coords;
        break;
    case Variant::TwoEdge:
        u.assign(config.edge1.begin(), config.edge1.end() - 1);
        u.insert(u.end(), config.edge2.begin(), config.edge2.end() - 1);
        break;
    }
    return u;
}

/// Displacements and momenta of the driven chain: q_k = x_k - k*a, unit masses.
struct ChainState {
    std::vector<double> q;
    std::vector<double> p;
    double t = 0.0;
};

} // namespace graphchain
