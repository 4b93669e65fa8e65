#pragma once

#include <string>

#include "geomineq/common.hpp"

namespace geomineq {

/// Extended-real concavity/homogeneity order p in R u {-inf, +inf}, with zero
/// kept as a distinguished point (the geometric-mean order): several
/// operations change meaning at p = 0 and must not confuse it with a small
/// finite value.
class Exponent {
public:
    Exponent() : v_(1.0) {}

    static Exponent finite(double v) { return Exponent(v); }
    static Exponent zero() { return Exponent(0.0); }
    static Exponent pos_inf() { return Exponent(kInf); }
    static Exponent neg_inf() { return Exponent(-kInf); }

    bool is_pos_inf() const { return v_ == kInf; }
    bool is_neg_inf() const { return v_ == -kInf; }
    bool is_infinite() const { return is_pos_inf() || is_neg_inf(); }
    bool is_zero() const { return v_ == 0.0; }
    bool is_finite() const { return !is_infinite(); }

    /// Finite numeric value; throws for +-inf.
    double value() const;

    /// 1/p with the conventions 1/(+-inf) = 0; throws for p = 0.
    double inv() const;

    std::string str() const;

    friend bool operator==(const Exponent& a, const Exponent& b) {
        return a.v_ == b.v_;
    }

private:
    explicit Exponent(double v) : v_(v) {}
    double v_;
};

/// Dual order q with 1/q = 1/p + n: a density positively homogeneous of
/// degree 1/p on R^n induces a measure homogeneous of order 1/q. The boundary
/// p = -1/n maps to q = -inf (the complemented-side convention for 1/q = 0).
/// p = 0 is rejected: q would be 0, which is excluded from the homogeneity
/// scale.
Exponent dual_exponent(const Exponent& p, int n);

/// Weighted p-mean of a, b in [0, +inf] with weight lambda on a:
///   M_p(a,b) = (lambda a^p + (1-lambda) b^p)^(1/p)
/// with the limit conventions: p=+inf -> max, p=-inf -> min, p=0 -> geometric
/// mean a^lambda b^(1-lambda); for p <= 0, min(a,b) = 0 forces the mean to 0.
/// Monotone nondecreasing in p; equals a when a == b.
ExtNonneg power_mean(ExtNonneg a, ExtNonneg b, double lambda, const Exponent& p);

} // namespace geomineq
