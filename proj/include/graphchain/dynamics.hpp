#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "graphchain/chain_model.hpp"
#include "graphchain/common.hpp"
#include "graphchain/scenario.hpp"
#include "graphchain/spectral.hpp"

namespace graphchain {

/// Velocity-dissipation law: the force on particle k is -g(v_k).
/// Linear uses g(v) = alpha_k v with per-particle coefficients (a single
/// entry broadcasts); Custom applies a user-supplied strictly increasing
/// odd map with g(0) = 0.
struct DissipationLaw {
    std::vector<double> alpha;
    std::function<double(double)> g;

    static DissipationLaw linear(double a) { return {{a}, nullptr}; }
    static DissipationLaw linear(std::vector<double> a) { return {std::move(a), nullptr}; }
    static DissipationLaw custom(std::function<double(double)> g) { return {{}, std::move(g)}; }

    bool is_linear() const { return !g; }

    double force(int k, double v) const {
        if (g) return -g(v);
        if (alpha.empty()) return 0.0;
        const double a = alpha.size() == 1 ? alpha[0] : alpha[std::size_t(k)];
        return -a * v;
    }

    void validate(std::size_t nfree) const {
        for (double a : alpha)
            if (!(a >= 0)) throw invalid_scenario("damping coefficients must be >= 0");
        if (!g && alpha.size() > 1 && alpha.size() != nfree)
            throw dimension_mismatch("damping coefficient count != free coordinates");
    }
};

struct DissipativeSpec {
    ScenarioSpec scenario;
    DissipationLaw law = DissipationLaw::linear(0.0);
};

struct OrderEvent {
    double t = 0.0;
    int pair = 0; ///< index k of the violated gap x_k - x_{k-1}
    double gap = 0.0;
};

struct Trajectory {
    ScenarioSpec scenario;
    std::vector<double> times;
    std::vector<ChainState> states; ///< q holds free coordinates, p velocities
    std::vector<OrderEvent> events; ///< gaps that crossed zero at recorded states
};

namespace detail {

/// Consecutive-neighbor gaps of a state for order diagnostics.
inline std::vector<double> neighbor_gaps(const ScenarioSpec& spec, const std::vector<double>& u) {
    Configuration cfg = configuration_from_free(spec, u);
    std::vector<double> gaps;
    switch (spec.variant) {
    case Variant::Circle:
        gaps = cfg.gaps;
        break;
    case Variant::FixedRightEnd:
    case Variant::SpringBothEnds:
        for (std::size_t i = 1; i < cfg.coords.size(); ++i)
            gaps.push_back(cfg.coords[i] - cfg.coords[i - 1]);
        break;
    case Variant::TwoEdge:
        for (std::size_t i = 1; i < cfg.edge1.size(); ++i)
            gaps.push_back(cfg.edge1[i] - cfg.edge1[i - 1]);
        for (std::size_t i = 1; i < cfg.edge2.size(); ++i)
            gaps.push_back(cfg.edge2[i] - cfg.edge2[i - 1]);
        break;
    }
    return gaps;
}

template <typename Accel>
void rk4_step(double t, double dt, std::vector<double>& u, std::vector<double>& v,
              const Accel& accel) {
    const std::size_t n = u.size();
    static thread_local std::vector<double> ku1, kv1, ku2, kv2, ku3, kv3, ku4, kv4, ut, vt;
    ku1 = v;
    kv1 = accel(t, u, v);
    ut.resize(n);
    vt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ut[i] = u[i] + 0.5 * dt * ku1[i];
        vt[i] = v[i] + 0.5 * dt * kv1[i];
    }
    ku2 = vt;
    kv2 = accel(t + 0.5 * dt, ut, vt);
    for (std::size_t i = 0; i < n; ++i) {
        ut[i] = u[i] + 0.5 * dt * ku2[i];
        vt[i] = v[i] + 0.5 * dt * kv2[i];
    }
    ku3 = vt;
    kv3 = accel(t + 0.5 * dt, ut, vt);
    for (std::size_t i = 0; i < n; ++i) {
        ut[i] = u[i] + dt * ku3[i];
        vt[i] = v[i] + dt * kv3[i];
    }
    ku4 = vt;
    kv4 = accel(t + dt, ut, vt);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] += dt / 6.0 * (ku1[i] + 2 * ku2[i] + 2 * ku3[i] + ku4[i]);
        v[i] += dt / 6.0 * (kv1[i] + 2 * kv2[i] + 2 * kv3[i] + kv4[i]);
    }
}

} // namespace detail

/// Fixed-step classical Runge-Kutta integration of
/// x_k'' = F_k - g(v_k) over the free coordinates of the scenario.
/// The run ends early once max(|v|, |F|) stays below 1e-10 for 100
/// consecutive steps. States are recorded every `stride` steps.
inline Trajectory integrate(const DissipativeSpec& dspec, const ChainState& init, double t_end,
                            double dt, int stride = 1) {
    const ScenarioSpec& spec = dspec.scenario;
    spec.validate();
    if (spec.variant == Variant::Circle && spec.forcing.kind == ForcingKind::CircleDrive)
        throw invalid_scenario("use simulate_circle_flow for the driven circle");
    const std::size_t nfree = free_coordinate_count(spec);
    dspec.law.validate(nfree);
    const double wmax = std::max({spec.omega0, spec.omega1, spec.omega2});
    if (!(dt > 0) || dt * wmax > 0.1)
        throw bad_step_size("need dt > 0 and dt * max frequency <= 0.1");
    if (init.q.size() != nfree || init.p.size() != nfree)
        throw dimension_mismatch("initial state size != free coordinates");

    auto accel = [&](double t, const std::vector<double>& u, const std::vector<double>& v) {
        std::vector<double> a = force_vector(spec, configuration_from_free(spec, u), t);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += dspec.law.force(int(i), v[i]);
        return a;
    };

    Trajectory traj;
    traj.scenario = spec;
    std::vector<double> u = init.q, v = init.p;
    double t = init.t;
    const long total_steps = std::lround(std::ceil((t_end - t) / dt));

    auto record = [&]() {
        traj.times.push_back(t);
        traj.states.push_back(ChainState{u, v, t});
        auto gaps = detail::neighbor_gaps(spec, u);
        for (std::size_t k = 0; k < gaps.size(); ++k)
            if (gaps[k] <= 0.0 && traj.events.size() < 1000)
                traj.events.push_back(OrderEvent{t, int(k + 1), gaps[k]});
    };
    record();

    int quiet_steps = 0;
    for (long step = 0; step < total_steps; ++step) {
        detail::rk4_step(t, dt, u, v, accel);
        t = init.t + (step + 1) * dt;
        if ((step + 1) % stride == 0 || step + 1 == total_steps) record();

        double activity = 0.0;
        for (double w : v) activity = std::max(activity, std::abs(w));
        for (double f : accel(t, u, v)) activity = std::max(activity, std::abs(f));
        quiet_steps = activity < 1e-10 ? quiet_steps + 1 : 0;
        if (quiet_steps >= 100) {
            if (traj.times.back() != t) record();
            break;
        }
    }
    return traj;
}

/// Root of g(v) = f/n: the speed of the stationary circle flow. Linear laws
/// invert exactly; general monotone laws are bisected on a geometrically
/// grown bracket until |g(v) - f/n| <= 1e-12.
inline double stationary_flow_velocity(double f, int n, const DissipationLaw& law) {
    if (!(f > 0)) throw invalid_scenario("flow needs f > 0");
    if (n < 1) throw invalid_scenario("flow needs n >= 1");
    const double phi = f / n;
    if (law.is_linear()) {
        const double a = law.alpha.empty() ? 0.0 : law.alpha[0];
        if (!(a > 0)) throw invalid_scenario("linear flow needs alpha > 0");
        return phi / a;
    }
    double hi = 1.0;
    int grow = 0;
    while (law.g(hi) < phi) {
        hi *= 2.0;
        if (++grow > 200) throw bracket_failure("dissipation law never reaches f/n");
    }
    double lo = 0.0;
    double v = 0.5 * hi;
    for (int it = 0; it < 400; ++it) {
        v = 0.5 * (lo + hi);
        const double r = law.g(v) - phi;
        if (std::abs(r) <= 1e-12) return v;
        (r < 0 ? lo : hi) = v;
    }
    if (std::abs(law.g(v) - phi) <= 1e-9) return v;
    throw bracket_failure("bisection stalled before reaching the flow residual");
}

struct FlowReport {
    double velocity = 0.0;           ///< mean particle velocity at the end of the run
    double velocity_spread = 0.0;    ///< max |v_k - velocity|
    std::vector<double> gaps;        ///< final gap profile (wrap gap last)
};

/// Driven circle: constant force f on particle 0, dissipation -g(v_k) on
/// every particle, all N coordinates free (positions unwrapped on the line,
/// the wrap bond closes through x_0 + L). Starts from uniform gaps at rest
/// unless an initial state is given.
inline std::pair<Trajectory, FlowReport> simulate_circle_flow(int n, double length, double omega1,
                                                              double f, const DissipationLaw& law,
                                                              double t_end, double dt,
                                                              int stride = 16,
                                                              const ChainState* init = nullptr) {
    ScenarioSpec spec = ScenarioSpec::circle(n, length, omega1, Forcing::circle_drive(f, 0.0));
    spec.validate();
    law.validate(std::size_t(n));
    const double wmax = spec.omega1;
    if (!(dt > 0) || dt * wmax > 0.1)
        throw bad_step_size("need dt > 0 and dt * max frequency <= 0.1");

    const double a = length / n;
    const double w1sq = sq(omega1);
    auto accel = [&](double /*t*/, const std::vector<double>& x, const std::vector<double>& v) {
        std::vector<double> acc(n);
        for (int k = 0; k < n; ++k) {
            const double below = (k == 0) ? x[0] - (x[n - 1] - length) : x[k] - x[k - 1];
            const double above = (k == n - 1) ? (x[0] + length) - x[k] : x[k + 1] - x[k];
            acc[k] = w1sq * (above - below) + law.force(k, v[k]);
            if (k == 0) acc[k] += f;
        }
        return acc;
    };

    std::vector<double> x(n), v(n, 0.0);
    double t0 = 0.0;
    if (init) {
        if (init->q.size() != std::size_t(n) || init->p.size() != std::size_t(n))
            throw dimension_mismatch("initial state size != n");
        x = init->q;
        v = init->p;
        t0 = init->t;
    } else {
        for (int k = 0; k < n; ++k) x[k] = k * a;
    }

    Trajectory traj;
    traj.scenario = spec;
    auto gaps_of = [&](const std::vector<double>& xs) {
        std::vector<double> g(n);
        for (int k = 1; k < n; ++k) g[k - 1] = xs[k] - xs[k - 1];
        g[n - 1] = xs[0] + length - xs[n - 1];
        return g;
    };
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(ChainState{x, v, t});
        auto g = gaps_of(x);
        for (int k = 0; k < n; ++k)
            if (g[k] <= 0.0 && traj.events.size() < 1000)
                traj.events.push_back(OrderEvent{t, k + 1, g[k]});
    };
    double t = t0;
    record(t);
    const long total_steps = std::lround(std::ceil((t_end - t0) / dt));
    for (long step = 0; step < total_steps; ++step) {
        detail::rk4_step(t, dt, x, v, accel);
        t = t0 + (step + 1) * dt;
        if ((step + 1) % stride == 0 || step + 1 == total_steps) record(t);
    }

    FlowReport rep;
    CompensatedSum vbar;
    for (double w : v) vbar.add(w);
    rep.velocity = vbar.value() / n;
    for (double w : v) rep.velocity_spread = std::max(rep.velocity_spread, std::abs(w - rep.velocity));
    rep.gaps = gaps_of(x);
    return {std::move(traj), rep};
}

struct OrderReport {
    bool violated = false;
    double t_first = 0.0;
    int pair = 0;
    double gap_at_violation = 0.0;
    double min_gap = 0.0; ///< smallest gap seen across the whole trajectory
};

/// Scans recorded states for gaps at or below min_gap; reports the first
/// violation and the global minimum gap.
inline OrderReport order_preservation(const Trajectory& traj, double min_gap = 0.0) {
    OrderReport rep;
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        std::vector<double> gaps;
        const auto& x = traj.states[i].q;
        if (traj.scenario.variant == Variant::Circle &&
            x.size() == std::size_t(traj.scenario.n)) {
            // Flow states carry all N raw coordinates; the wrap bond closes
            // through x_0 + L.
            for (std::size_t k = 1; k < x.size(); ++k) gaps.push_back(x[k] - x[k - 1]);
            gaps.push_back(x[0] + traj.scenario.length - x.back());
        } else {
            gaps = detail::neighbor_gaps(traj.scenario, x);
        }
        for (std::size_t k = 0; k < gaps.size(); ++k) {
            rep.min_gap = std::min(rep.min_gap, gaps[k]);
            if (!rep.violated && gaps[k] <= min_gap) {
                rep.violated = true;
                rep.t_first = traj.times[i];
                rep.pair = int(k + 1);
                rep.gap_at_violation = gaps[k];
            }
        }
    }
    return rep;
}

/// Computable displacement bound for the driven chain, mode by mode:
/// sup_t |q_j(t)| <= c sum_k |(g_k,e_N)(g_k,e_j)| b_k with
/// b_k = (omega/(omega^2 - nu_k^2))(1/omega + 1/nu_k). Requires
/// omega^2 > 4 omega1^2 so every b_k is positive.
inline std::vector<double> collision_bound(const SpectralModel& model, double c, double omega) {
    if (!(sq(omega) > 4.0 * sq(model.omega1)))
        throw pole_error("collision bound needs omega^2 > 4 omega1^2");
    const int n = model.n;
    std::vector<double> bk(n);
    for (int k = 1; k <= n; ++k) {
        const double nu = model.nu[k - 1];
        bk[k - 1] = omega / (sq(omega) - sq(nu)) * (1.0 / omega + 1.0 / nu);
    }
    std::vector<double> bound(n);
    for (int j = 1; j <= n; ++j) {
        CompensatedSum s;
        for (int k = 1; k <= n; ++k)
            s.add(std::abs(model.proj_last[k - 1] * model.proj(k, j)) * bk[k - 1]);
        bound[j - 1] = std::abs(c) * s.value();
    }
    return bound;
}

} // namespace graphchain
