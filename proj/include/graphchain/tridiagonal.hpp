#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "graphchain/common.hpp"

namespace graphchain {

/// Solves the symmetric tridiagonal system A x = b by LDL^T factorization.
/// diag holds A_ii (size n), off holds A_{i,i+1} (size n-1). The stiffness
/// systems assembled here are positive definite, so no pivoting is needed;
/// a vanishing pivot signals a singular (all-frequencies-zero) system.
inline std::vector<double> solve_tridiagonal(std::vector<double> diag,
                                             const std::vector<double>& off,
                                             std::vector<double> b) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    if (off.size() + 1 != n || b.size() != n)
        throw dimension_mismatch("tridiagonal system size mismatch");

    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    for (double e : off) scale = std::max(scale, std::abs(e));
    const double tiny = scale * 1e-14;

    // Forward elimination.
    for (std::size_t i = 1; i < n; ++i) {
        if (!(std::abs(diag[i - 1]) > tiny))
            throw singular_system("stationarity system is singular");
        double m = off[i - 1] / diag[i - 1];
        diag[i] -= m * off[i - 1];
        b[i] -= m * b[i - 1];
    }
    if (!(std::abs(diag[n - 1]) > tiny))
        throw singular_system("stationarity system is singular");

    // Back substitution.
    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (b[i] - off[i] * x[i + 1]) / diag[i];
    return x;
}

} // namespace graphchain
