#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace geomineq {

/// Extended nonnegative real: values in [0, +inf]. Plain double carrying the
/// conventions a + inf = inf and 0 * inf = 0 (use ext_mul where it matters).
using ExtNonneg = double;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double sq(double x) { return x * x; }

/// Product with the measure-theoretic convention 0 * inf = 0.
inline ExtNonneg ext_mul(ExtNonneg a, ExtNonneg b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

/// Relative closeness against max(|a|,|b|) with an absolute floor.
inline bool rel_close(double a, double b, double rel, double floor_abs = 1e-12) {
    if (a == b) return true; // covers matching infinities
    const double scale = std::max({std::fabs(a), std::fabs(b), floor_abs});
    return std::fabs(a - b) <= rel * scale;
}

/// Short default-precision rendering for witnesses and notes.
std::string fmt_double(double v);

/// Deterministic 64-bit generator (splitmix64). Used instead of std::
/// distributions so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a,b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Log-uniform in [a,b), a,b > 0.
    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }

    /// Uniform integer in [0,n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

/// FNV-1a 64-bit digest; stable content fingerprint for reports.
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace geomineq
