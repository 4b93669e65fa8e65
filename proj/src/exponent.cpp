#include "geomineq/exponent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geomineq {

double Exponent::value() const {
    if (is_infinite()) {
        throw std::domain_error("Exponent::value: order is infinite");
    }
    return v_;
}

double Exponent::inv() const {
    if (is_infinite()) return 0.0;
    if (v_ == 0.0) {
        throw std::domain_error("Exponent::inv: order is zero");
    }
    return 1.0 / v_;
}

std::string Exponent::str() const {
    if (is_pos_inf()) return "+inf";
    if (is_neg_inf()) return "-inf";
    std::ostringstream os;
    os << v_;
    return os.str();
}

Exponent dual_exponent(const Exponent& p, int n) {
    if (n < 1) throw std::invalid_argument("dual_exponent: n must be >= 1");
    if (p.is_zero()) {
        throw std::invalid_argument("dual_exponent: p = 0 has no dual order");
    }
    const double inv_q = p.inv() + static_cast<double>(n);
    if (inv_q == 0.0) return Exponent::neg_inf();
    return Exponent::finite(1.0 / inv_q);
}

ExtNonneg power_mean(ExtNonneg a, ExtNonneg b, double lambda, const Exponent& p) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("power_mean: lambda outside [0,1]");
    }
    if (!(a >= 0.0) || !(b >= 0.0)) {
        throw std::invalid_argument("power_mean: negative argument");
    }
    if (lambda == 0.0) return b;
    if (lambda == 1.0) return a;
    if (a == b) return a;

    if (p.is_pos_inf()) return a > b ? a : b;
    if (p.is_neg_inf()) return a < b ? a : b;

    if (p.is_zero()) {
        // Geometric mean. 0 and +inf never meet here: a == b was handled, and
        // if exactly one of them is 0 (or +inf) the product convention gives 0
        // (resp. +inf) as the correct limit of a^lambda b^(1-lambda).
        if (a == 0.0 || b == 0.0) return 0.0;
        if (a == kInf || b == kInf) return kInf;
        return std::exp(lambda * std::log(a) + (1.0 - lambda) * std::log(b));
    }

    const double pv = p.value();
    if (pv > 0.0) {
        if (a == kInf || b == kInf) return kInf;
        // Factor out the max so the powers stay in [0,1]: no overflow, and
        // the result is exact when one weight dominates.
        const double m = a > b ? a : b;
        if (m == 0.0) return 0.0;
        const double ra = a / m;
        const double rb = b / m;
        const double s = lambda * std::pow(ra, pv) + (1.0 - lambda) * std::pow(rb, pv);
        return m * std::pow(s, 1.0 / pv);
    }

    // pv < 0: a zero argument is absorbing, +inf contributes 0 to the sum.
    if (a == 0.0 || b == 0.0) return 0.0;
    const double m = a < b ? a : b; // factor out the min; ratios >= 1
    if (m == kInf) return kInf;
    const double ra = a / m; // in [1, +inf]
    const double rb = b / m;
    const double ta = (ra == kInf) ? 0.0 : std::pow(ra, pv);
    const double tb = (rb == kInf) ? 0.0 : std::pow(rb, pv);
    const double s = lambda * ta + (1.0 - lambda) * tb;
    if (s == 0.0) return kInf;
    return m * std::pow(s, 1.0 / pv);
}

} // namespace geomineq
