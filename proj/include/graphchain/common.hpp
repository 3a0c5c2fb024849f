#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphchain {

/// Error carrying a stable machine-readable class string.
/// Classes used across the library:
///   "invalid-scenario", "dimension-mismatch", "bad-step-size"   (usage errors)
///   "resonance", "integrand-pole", "singular-system",
///   "bracket-failure", "no-equilibrium"                         (numerical domain)
class Error : public std::runtime_error {
public:
    Error(std::string cls, const std::string& what)
        : std::runtime_error(what), cls_(std::move(cls)) {}
    const std::string& error_class() const { return cls_; }

private:
    std::string cls_;
};

inline Error invalid_scenario(const std::string& what) { return Error("invalid-scenario", what); }
inline Error dimension_mismatch(const std::string& what) { return Error("dimension-mismatch", what); }
inline Error resonance_error(const std::string& what) { return Error("resonance", what); }
inline Error pole_error(const std::string& what) { return Error("integrand-pole", what); }
inline Error singular_system(const std::string& what) { return Error("singular-system", what); }
inline Error bracket_failure(const std::string& what) { return Error("bracket-failure", what); }
inline Error bad_step_size(const std::string& what) { return Error("bad-step-size", what); }

/// Neumaier compensated accumulator. Keeps long energy sums accurate
/// at particle counts around 1e4 and beyond.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double sq(double x) { return x * x; }

inline constexpr double pi = 3.14159265358979323846;

/// Half-open or closed real interval, used for admissible-force windows.
/// An interval with lo > hi is empty; infinite endpoints are allowed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = false;

    bool contains(double x) const {
        if (lo_closed ? x < lo : x <= lo) return false;
        if (hi_closed ? x > hi : x >= hi) return false;
        return true;
    }
};

} // namespace graphchain
