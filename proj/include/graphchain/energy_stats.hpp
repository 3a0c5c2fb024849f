#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "graphchain/common.hpp"
#include "graphchain/quadrature.hpp"
#include "graphchain/spectral.hpp"

namespace graphchain {

namespace detail {

inline void require_zero_init(const ForcedResponse& fr, const char* who) {
    auto nonzero = [](const std::vector<double>& v) {
        for (double x : v)
            if (x != 0.0) return true;
        return false;
    };
    if (nonzero(fr.q0) || nonzero(fr.p0))
        throw invalid_scenario(std::string(who) + " assumes zero initial conditions");
}

/// Time average of (sum_k beta_k qhat_k(t))^2 for the driven chain:
/// (1/(2 omega^2)) (sum beta_k A_k)^2 + (1/2) sum (beta_k A_k / nu_k)^2.
inline double mean_square_mode_sum(const ForcedResponse& fr, const std::vector<double>& beta) {
    CompensatedSum lin, quad;
    for (int k = 1; k <= fr.model.n; ++k) {
        const double ba = beta[k - 1] * fr.amp[k - 1];
        lin.add(ba);
        quad.add(sq(ba / fr.model.nu[k - 1]));
    }
    return sq(lin.value()) / (2.0 * sq(fr.omega)) + 0.5 * quad.value();
}

} // namespace detail

/// Long-time mean kinetic energy of particle j under zero initial conditions:
/// (1/4)(sum_k (g_k,e_N)(g_k,e_j) A_k)^2 + (1/4) sum_k ((g_k,e_N)(g_k,e_j) A_k)^2.
inline double mean_kinetic_exact(const ForcedResponse& fr, int j) {
    detail::require_zero_init(fr, "mean_kinetic_exact");
    if (fr.c == 0.0) return 0.0;
    CompensatedSum lin, quad;
    for (int k = 1; k <= fr.model.n; ++k) {
        const double b = fr.model.proj_last[k - 1] * fr.model.proj(k, j) * fr.amp[k - 1];
        lin.add(b);
        quad.add(sq(b));
    }
    return 0.25 * sq(lin.value()) + 0.25 * quad.value();
}

/// Long-time mean of the drive correlation <q_N sin(omega t)>.
inline double mean_drive_correlation(const ForcedResponse& fr) {
    CompensatedSum s;
    for (int k = 1; k <= fr.model.n; ++k)
        s.add(sq(fr.model.proj_last[k - 1]) * fr.c / (sq(fr.model.nu[k - 1]) - sq(fr.omega)));
    return 0.5 * s.value();
}

/// Long-time mean potential energy of particle j (half-bond convention,
/// full wall spring at j = 1, drive work term at j = N).
inline double mean_potential_exact(const ForcedResponse& fr, int j) {
    detail::require_zero_init(fr, "mean_potential_exact");
    const int n = fr.model.n;
    if (j < 1 || j > n) throw dimension_mismatch("particle index out of range");
    if (fr.c == 0.0) return 0.0;
    const double w = sq(fr.model.omega1);

    auto bond_beta = [&](int hi, int lo) {
        // beta_k for the bond displacement q_hi - q_lo (q_0 = 0).
        std::vector<double> beta(n);
        for (int k = 1; k <= n; ++k) {
            double d = fr.model.proj(k, hi) - (lo >= 1 ? fr.model.proj(k, lo) : 0.0);
            beta[k - 1] = fr.model.proj_last[k - 1] * d;
        }
        return beta;
    };

    double u = 0.0;
    if (j == 1) {
        u += 0.5 * w * detail::mean_square_mode_sum(fr, bond_beta(1, 0));
        if (n > 1) u += 0.25 * w * detail::mean_square_mode_sum(fr, bond_beta(2, 1));
    } else {
        u += 0.25 * w * detail::mean_square_mode_sum(fr, bond_beta(j, j - 1));
        if (j < n) u += 0.25 * w * detail::mean_square_mode_sum(fr, bond_beta(j + 1, j));
    }
    if (j == n) u -= fr.c * mean_drive_correlation(fr);
    return u;
}

/// (<U_1>, <U_N>) in one call.
inline std::pair<double, double> mean_potential_ends_exact(const ForcedResponse& fr) {
    return {mean_potential_exact(fr, 1), mean_potential_exact(fr, fr.model.n)};
}

/// I = integral_0^pi u^2 / (2 omega1^2 (cos u + 1) - omega^2) du, defined for
/// omega^2 > 4 omega1^2 (otherwise the integrand has a pole on the interval).
inline double limit_integral(double omega1, double omega) {
    if (!(sq(omega) > 4.0 * sq(omega1)))
        throw pole_error("limit integral needs omega^2 > 4 omega1^2");
    const double w2 = 2.0 * sq(omega1), o2 = sq(omega);
    return adaptive_simpson([&](double u) { return sq(u) / (w2 * (std::cos(u) + 1.0) - o2); },
                            0.0, pi, 1e-10, 40);
}

/// Large-N limit of <T_N>: K = (c^2 / 4 pi^2) I^2. The matching limit of
/// <T_1> is zero.
inline double limit_kinetic_last(double omega1, double omega, double c) {
    const double I = limit_integral(omega1, omega);
    return sq(c) / (4.0 * sq(pi)) * sq(I);
}

/// Large-N limit of <U_N>: (1/2)(omega1 c I / pi)^2 - c^2 I / (4 pi).
inline double limit_potential_last(double omega1, double omega, double c) {
    const double I = limit_integral(omega1, omega);
    return 0.5 * sq(omega1 * c * I / pi) - sq(c) * I / (4.0 * pi);
}

/// Finite-window time averages along the exact modal trajectory, sampled at
/// dt = 2 pi / (64 max(omega, nu_1)) with the trapezoid rule.
struct EnergyAverages {
    std::vector<double> kinetic;   ///< per-particle <T_j>
    std::vector<double> potential; ///< per-particle <U_j>
    double total_kinetic = 0.0;
    double total_potential = 0.0; ///< includes the drive term -c q_N sin(omega t)
};

inline double default_sample_dt(const ForcedResponse& fr) {
    return 2.0 * pi / (64.0 * std::max(fr.omega, fr.model.nu[0]));
}

inline EnergyAverages time_average_energies(const ForcedResponse& fr, double t_window,
                                            double dt = 0.0) {
    if (dt <= 0.0) dt = default_sample_dt(fr);
    const int n = fr.model.n;
    const std::size_t steps = std::size_t(std::ceil(t_window / dt));
    std::vector<CompensatedSum> kin(n), pot(n);
    CompensatedSum tot_kin, tot_pot;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = std::min(i * dt, t_window);
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        ChainState st = forced_response_state(fr, t);
        double tk = 0.0;
        for (int j = 1; j <= n; ++j) {
            auto [k, u] = particle_energy_instant(fr, st, j);
            kin[j - 1].add(w * k);
            pot[j - 1].add(w * u);
            tk += k;
        }
        StiffnessMatrix v{n, fr.model.omega1};
        double tu = 0.5 * v.quadratic_form(st.q) -
                    fr.c * std::sin(fr.omega * t) * st.q[n - 1];
        tot_kin.add(w * tk);
        tot_pot.add(w * tu);
        weight_sum += w;
    }
    EnergyAverages out;
    out.kinetic.resize(n);
    out.potential.resize(n);
    for (int j = 0; j < n; ++j) {
        out.kinetic[j] = kin[j].value() / weight_sum;
        out.potential[j] = pot[j].value() / weight_sum;
    }
    out.total_kinetic = tot_kin.value() / weight_sum;
    out.total_potential = tot_pot.value() / weight_sum;
    return out;
}

/// <T> - <U> over [0, t_window]; for bounded motion this decays like
/// O(1/t_window). U carries the external-force term when the chain is driven.
inline double virial_residual(const ForcedResponse& fr, double t_window, double dt = 0.0) {
    EnergyAverages avg = time_average_energies(fr, t_window, dt);
    return avg.total_kinetic - avg.total_potential;
}

/// Per-particle mean kinetic/potential table with the large-N limit values.
struct EnergyReport {
    std::vector<double> mean_kinetic;
    std::vector<double> mean_potential;
    double mean_potential_first = 0.0;
    double mean_potential_last = 0.0;
    double virial_residual = 0.0;
    std::map<std::string, double> limits; // I_integral, K_kinetic_last, U_last_limit
};

inline EnergyReport energy_report(const ForcedResponse& fr, double virial_window = 0.0) {
    EnergyReport rep;
    const int n = fr.model.n;
    rep.mean_kinetic.resize(n);
    rep.mean_potential.resize(n);
    for (int j = 1; j <= n; ++j) {
        rep.mean_kinetic[j - 1] = mean_kinetic_exact(fr, j);
        rep.mean_potential[j - 1] = mean_potential_exact(fr, j);
    }
    rep.mean_potential_first = rep.mean_potential.front();
    rep.mean_potential_last = rep.mean_potential.back();
    if (virial_window > 0.0) rep.virial_residual = virial_residual(fr, virial_window);
    if (sq(fr.omega) > 4.0 * sq(fr.model.omega1)) {
        const double I = limit_integral(fr.model.omega1, fr.omega);
        rep.limits["I_integral"] = I;
        rep.limits["K_kinetic_last"] = sq(fr.c) / (4.0 * sq(pi)) * sq(I);
        rep.limits["U_last_limit"] =
            0.5 * sq(fr.model.omega1 * fr.c * I / pi) - sq(fr.c) * I / (4.0 * pi);
    }
    return rep;
}

/// Scaled continuum parameters: force f1/N per particle, stiffness
/// omega1^2 = w1 N, spacing L/N.
struct ContinuumParams {
    double f1 = 1.0;
    double w1 = 1.0;
    double length = 1.0;

    void validate() const {
        if (!(f1 > 0) || !(w1 > 0) || !(length > 0))
            throw invalid_scenario("continuum parameters must be positive");
        if (!(f1 < length * w1))
            throw invalid_scenario("continuum admissibility needs f1 < L w1");
    }
};

enum class ContinuumFamily { Lattice, Equilibrium };

/// Limit local energy density u(x) of the scaled chain.
/// Lattice family: -f1 x / L. Equilibrium family:
/// 3 f1^2 x^2 / (2 L^3 w1) - f1 x / L - f1^2 / (2 w1 L); both integrate to
/// -f1 L / 2 over [0, L].
inline double continuum_density(const ContinuumParams& p, double x, ContinuumFamily family) {
    p.validate();
    if (!(x >= 0.0) || !(x <= p.length))
        throw invalid_scenario("density point outside [0, L]");
    const double lin = -p.f1 * x / p.length;
    if (family == ContinuumFamily::Lattice) return lin;
    return 1.5 * sq(p.f1) * sq(x) / (sq(p.length) * p.length * p.w1) + lin -
           sq(p.f1) / (2.0 * p.w1 * p.length);
}

struct DensitySample {
    double x = 0.0;
    double lattice = 0.0;            // windowed density of the uniform lattice
    double equilibrium = 0.0;        // windowed density of the relaxed chain
    double lattice_formula = 0.0;    // continuum_density targets
    double equilibrium_formula = 0.0;
};

/// Finite-n evaluation of the scaled chain against the continuum targets.
struct ContinuumReport {
    int n = 0;
    double x0 = 0.0;
    double x0_limit = 0.0;
    double u_int = 0.0;          // interaction energy of the relaxed chain
    double u_ext = 0.0;          // field energy of the relaxed chain
    double u_total = 0.0;
    double u_total_lattice = 0.0;
    double target = 0.0;         // -f1 L / 2
    std::vector<DensitySample> densities;
};

/// Builds the pinned-end equilibrium with the boundary spring absent
/// (x_0 free), at the scaling f = f1/n, omega1^2 = w1 n, a = L/n, and
/// compares windowed local energies against the continuum densities.
inline ContinuumReport continuum_convergence(const ContinuumParams& p, int n,
                                             std::vector<double> density_points = {},
                                             double window = 0.0) {
    p.validate();
    if (n < 2) throw invalid_scenario("continuum comparison needs n >= 2");
    const double f = p.f1 / n;
    const double w1sq = p.w1 * n;
    const double a = p.length / n;
    if (window <= 0.0) window = 0.05 * p.length;
    if (density_points.empty())
        density_points = {0.25 * p.length, 0.5 * p.length, 0.75 * p.length};

    ContinuumReport rep;
    rep.n = n;
    rep.target = -p.f1 * p.length / 2.0;
    rep.x0_limit = p.f1 / (2.0 * p.w1);

    // Relaxed chain: gap_k = a - f k / w1sq, x_n pinned at L.
    rep.x0 = f * n * (n + 1.0) / (2.0 * w1sq);
    std::vector<double> xs(n + 1);
    xs[0] = rep.x0;
    for (int k = 1; k <= n; ++k) xs[k] = xs[k - 1] + (a - f * k / w1sq);
    xs[n] = p.length;

    CompensatedSum u_int, u_ext;
    for (int k = 1; k <= n; ++k) u_int.add(0.5 * sq(f * k) / w1sq);
    for (int k = 0; k < n; ++k) u_ext.add(-f * xs[k]);
    rep.u_int = u_int.value();
    rep.u_ext = u_ext.value();
    rep.u_total = rep.u_int + rep.u_ext;
    rep.u_total_lattice = -f * a * n * (n - 1.0) / 2.0;

    // Per-particle energies: half of each adjacent bond plus the field term.
    auto particle_energy = [&](const std::vector<double>& x, int k, bool lattice) {
        double e = 0.0;
        if (!lattice) {
            if (k >= 1) e += 0.25 * w1sq * sq(x[k] - x[k - 1] - a);
            if (k < n) e += 0.25 * w1sq * sq(x[k + 1] - x[k] - a);
        }
        if (k < n) e -= f * x[k];
        return e;
    };
    std::vector<double> lattice_xs(n + 1);
    for (int k = 0; k <= n; ++k) lattice_xs[k] = k * a;

    for (double xq : density_points) {
        DensitySample s;
        s.x = xq;
        const double lo = xq - 0.5 * window, hi = xq + 0.5 * window;
        CompensatedSum dens_eq, dens_lat;
        for (int k = 0; k <= n; ++k) {
            if (xs[k] >= lo && xs[k] < hi) dens_eq.add(particle_energy(xs, k, false));
            if (lattice_xs[k] >= lo && lattice_xs[k] < hi)
                dens_lat.add(particle_energy(lattice_xs, k, true));
        }
        s.equilibrium = dens_eq.value() / window;
        s.lattice = dens_lat.value() / window;
        s.equilibrium_formula = continuum_density(p, xq, ContinuumFamily::Equilibrium);
        s.lattice_formula = continuum_density(p, xq, ContinuumFamily::Lattice);
        rep.densities.push_back(s);
    }
    return rep;
}

} // namespace graphchain
