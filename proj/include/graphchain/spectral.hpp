#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "graphchain/common.hpp"
#include "graphchain/scenario.hpp"

namespace graphchain {

/// Stiffness matrix of the pinned-left-end chain in displacement coordinates:
/// tridiagonal, diagonal 2*omega1^2 except omega1^2 in the last row,
/// off-diagonals -omega1^2.
struct StiffnessMatrix {
    int n = 0;
    double omega1 = 1.0;

    double entry(int i, int j) const {
        const double w = sq(omega1);
        if (i == j) return (i == n - 1) ? w : 2 * w;
        if (i - j == 1 || j - i == 1) return -w;
        return 0.0;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        const double w = sq(omega1);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            double v = ((i == n - 1) ? w : 2 * w) * x[i];
            if (i > 0) v -= w * x[i - 1];
            if (i + 1 < n) v -= w * x[i + 1];
            y[i] = v;
        }
        return y;
    }

    double quadratic_form(const std::vector<double>& x) const {
        // (x, Vx) = w * (x_1^2 + sum (x_{j+1} - x_j)^2), the bond expansion.
        const double w = sq(omega1);
        CompensatedSum s;
        s.add(w * sq(x[0]));
        for (int j = 0; j + 1 < n; ++j) s.add(w * sq(x[j + 1] - x[j]));
        return s.value();
    }
};

inline StiffnessMatrix build_matrix(int n, double omega1) {
    if (n < 1) throw invalid_scenario("stiffness matrix needs n >= 1");
    return StiffnessMatrix{n, omega1};
}

/// Closed-form spectrum of the pinned-end chain matrix.
///
/// lambda_k = 2 omega1^2 (cos(pi k / (N + 1/2)) + 1) = 4 omega1^2 cos^2(pi k / (2N+1)),
/// strictly decreasing in k, and the normalized eigenvectors have components
/// (g_k, e_j) = (-1)^{j-1} * 2/sqrt(2N+1) * sin(2 pi jk / (2N+1)).
/// The normalization uses sum_j sin^2(jk pi/(N+1/2)) = (2N+1)/4, which is
/// exact for every k, so no floating sums enter even at very large N.
class SpectralModel {
public:
    int n = 0;
    double omega1 = 1.0;
    std::vector<double> nu;        ///< nu_k > 0, nu_k^2 = lambda_k, k = 1..n
    std::vector<double> proj_last; ///< (g_k, e_N)
    std::vector<double> norm_h;    ///< (h_k, h_k) of the unnormalized eigenvectors

    /// (g_k, e_j); 1-based mode k and particle j.
    double proj(int k, int j) const {
        // sin(2 pi jk / (2N+1)) with the angle reduced by integer arithmetic.
        const std::int64_t m = 2 * std::int64_t(n) + 1;
        const std::int64_t r = (std::int64_t(j) * k) % m;
        double s = std::sin(2.0 * pi * double(r) / double(m));
        double val = scale_ * s;
        return (j % 2 == 1) ? val : -val;
    }

    std::vector<double> eigenvector(int k) const {
        std::vector<double> g(n);
        for (int j = 1; j <= n; ++j) g[j - 1] = proj(k, j);
        return g;
    }

    double eigenvalue(int k) const { return sq(nu[k - 1]); }

    double dot_eigenvector(int k, const std::vector<double>& x) const {
        CompensatedSum s;
        for (int j = 1; j <= n; ++j) s.add(proj(k, j) * x[j - 1]);
        return s.value();
    }

    static SpectralModel build(int n, double omega1) {
        if (n < 1) throw invalid_scenario("spectral model needs n >= 1");
        SpectralModel m;
        m.n = n;
        m.omega1 = omega1;
        m.scale_ = 2.0 / std::sqrt(2.0 * n + 1.0);
        m.nu.resize(n);
        m.proj_last.resize(n);
        m.norm_h.resize(n);
        for (int k = 1; k <= n; ++k) {
            const double half_angle = pi * k / (2.0 * n + 1.0);
            m.nu[k - 1] = 2.0 * omega1 * std::cos(half_angle);
            m.norm_h[k - 1] = (2.0 * n + 1.0) / (4.0 * sq(std::sin(2.0 * half_angle)));
            m.proj_last[k - 1] = m.proj(k, n);
        }
        return m;
    }

private:
    double scale_ = 1.0;
};

inline SpectralModel eigen_closed_form(int n, double omega1) {
    return SpectralModel::build(n, omega1);
}

/// Forced chain under f(t) = c sin(omega t): modal amplitudes and optional
/// non-zero initial state. Construction rejects near-resonant drives, where
/// the amplitudes A_k = omega c / (nu_k^2 - omega^2) blow up.
struct ForcedResponse {
    SpectralModel model;
    double c = 0.0;
    double omega = 0.0;
    std::vector<double> amp;    ///< A_k
    std::vector<double> q0, p0; ///< initial state (empty means zero)
    std::vector<double> q0_modal, p0_modal;

    ForcedResponse(SpectralModel m, double c_, double omega_, std::vector<double> q0_ = {},
                   std::vector<double> p0_ = {})
        : model(std::move(m)), c(c_), omega(omega_), q0(std::move(q0_)), p0(std::move(p0_)) {
        const int n = model.n;
        if (!q0.empty() && q0.size() != std::size_t(n))
            throw dimension_mismatch("q0 size != n");
        if (!p0.empty() && p0.size() != std::size_t(n))
            throw dimension_mismatch("p0 size != n");
        amp.resize(n);
        for (int k = 1; k <= n; ++k) {
            const double nu = model.nu[k - 1];
            if (std::abs(omega - nu) < 1e-9 * std::max(std::abs(omega), nu))
                throw resonance_error("drive resonates with mode " + std::to_string(k));
            amp[k - 1] = omega * c / (sq(nu) - sq(omega));
        }
        if (!q0.empty()) {
            q0_modal.resize(n);
            for (int k = 1; k <= n; ++k) q0_modal[k - 1] = model.dot_eigenvector(k, q0);
        }
        if (!p0.empty()) {
            p0_modal.resize(n);
            for (int k = 1; k <= n; ++k) p0_modal[k - 1] = model.dot_eigenvector(k, p0);
        }
    }

    /// Drive contribution to mode k: qhat_k(t), for omega != nu_k.
    double qhat(int k, double t) const {
        const double nu = model.nu[k - 1];
        return amp[k - 1] * (std::sin(omega * t) / omega - std::sin(nu * t) / nu);
    }
    double phat(int k, double t) const {
        const double nu = model.nu[k - 1];
        return amp[k - 1] * (std::cos(omega * t) - std::cos(nu * t));
    }

    bool driven() const { return c != 0.0 && omega != 0.0; }

    /// Full modal coordinate of mode k at time t (drive plus free evolution).
    double mode_q(int k, double t) const {
        const double nu = model.nu[k - 1];
        double v = driven() ? model.proj_last[k - 1] * qhat(k, t) : 0.0;
        if (!q0_modal.empty()) v += q0_modal[k - 1] * std::cos(nu * t);
        if (!p0_modal.empty()) v += p0_modal[k - 1] * std::sin(nu * t) / nu;
        return v;
    }
    double mode_p(int k, double t) const {
        const double nu = model.nu[k - 1];
        double v = driven() ? model.proj_last[k - 1] * phat(k, t) : 0.0;
        if (!q0_modal.empty()) v -= q0_modal[k - 1] * nu * std::sin(nu * t);
        if (!p0_modal.empty()) v += p0_modal[k - 1] * std::cos(nu * t);
        return v;
    }
};

/// Exact state (q(t), p(t)) by modal superposition. Dense sum: O(N^2) per call.
inline ChainState forced_response_state(const ForcedResponse& fr, double t) {
    const int n = fr.model.n;
    std::vector<double> mq(n), mp(n);
    for (int k = 1; k <= n; ++k) {
        mq[k - 1] = fr.mode_q(k, t);
        mp[k - 1] = fr.mode_p(k, t);
    }
    ChainState st;
    st.t = t;
    st.q.resize(n);
    st.p.resize(n);
    for (int j = 1; j <= n; ++j) {
        CompensatedSum sq_, sp_;
        for (int k = 1; k <= n; ++k) {
            const double g = fr.model.proj(k, j);
            sq_.add(g * mq[k - 1]);
            sp_.add(g * mp[k - 1]);
        }
        st.q[j - 1] = sq_.value();
        st.p[j - 1] = sp_.value();
    }
    return st;
}

/// Trajectory of a single particle over many times: projections are reused,
/// so the batch costs O(N^2 + N T) instead of O(N^2 T).
inline std::vector<std::pair<double, double>> particle_series(const ForcedResponse& fr, int j,
                                                              const std::vector<double>& times) {
    const int n = fr.model.n;
    std::vector<double> gj(n);
    for (int k = 1; k <= n; ++k) gj[k - 1] = fr.model.proj(k, j);
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    for (double t : times) {
        CompensatedSum sq_, sp_;
        for (int k = 1; k <= n; ++k) {
            sq_.add(gj[k - 1] * fr.mode_q(k, t));
            sp_.add(gj[k - 1] * fr.mode_p(k, t));
        }
        out.emplace_back(sq_.value(), sp_.value());
    }
    return out;
}

/// Kinetic and potential energy of particle j at time t, half-bond convention:
/// interior particles carry half of each neighboring bond, particle 1 carries
/// the full wall spring, particle N carries the drive work term.
inline std::pair<double, double> particle_energy_instant(const ForcedResponse& fr,
                                                         const ChainState& st, int j) {
    const int n = fr.model.n;
    if (j < 1 || j > n) throw dimension_mismatch("particle index out of range");
    const double w = sq(fr.model.omega1);
    const double kinetic = 0.5 * sq(st.p[j - 1]);
    double potential = 0.0;
    const double q_jm1 = (j >= 2) ? st.q[j - 2] : 0.0;
    if (j == 1)
        potential += 0.5 * w * sq(st.q[0]);
    else
        potential += 0.25 * w * sq(st.q[j - 1] - q_jm1);
    if (j < n)
        potential += 0.25 * w * sq(st.q[j] - st.q[j - 1]);
    else
        potential -= fr.c * st.q[n - 1] * std::sin(fr.omega * st.t);
    return {kinetic, potential};
}

inline std::pair<double, double> particle_energy_instant(const ForcedResponse& fr, double t,
                                                         int j) {
    return particle_energy_instant(fr, forced_response_state(fr, t), j);
}

/// H(psi(t)) = T + U - f(t) q_N along the driven trajectory.
inline double total_energy(const ForcedResponse& fr, const ChainState& st) {
    CompensatedSum kin;
    for (double p : st.p) kin.add(0.5 * sq(p));
    StiffnessMatrix v{fr.model.n, fr.model.omega1};
    double u = 0.5 * v.quadratic_form(st.q);
    return kin.value() + u - fr.c * std::sin(fr.omega * st.t) * st.q[fr.model.n - 1];
}

} // namespace graphchain
