#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "geomineq/common.hpp"

namespace geomineq {

/// Shape flags of a 1-D radial density, declared by each law and verifiable
/// numerically (see check_logconvex / validate_law_shape).
struct LawTraits {
    bool nonincreasing = false;
    bool origin_nonintegrable = false; // integral of phi over (0,t) diverges
    bool tail_integrable = false;      // integral of phi over (t,inf) finite
    bool log_convex = false;
    bool strictly_log_convex = false;
    bool compact_support = false; // phi vanishes beyond support_end()
};

/// A 1-D density phi on (0,inf) with tail integral Phi(t) = integral of phi
/// over [t,inf), its inverse, and the origin integral G(t) over (0,t].
/// Conventions: phi(inf) = 0, Phi_inv(0) = +inf for unbounded support and
/// = support_end() for compact support. All shipped laws evaluate Phi, G and
/// Phi_inv in closed form; function_law falls back to adaptive quadrature and
/// monotone bisection.
class RadialLaw {
public:
    virtual ~RadialLaw() = default;

    /// Density value at t > 0 (t = 0 allowed where the right limit exists).
    virtual double phi(double t) const = 0;

    /// Tail integral over [t, inf); +inf when the tail is not integrable.
    virtual ExtNonneg Phi(double t) const = 0;

    /// Inverse tail integral: smallest s with Phi(s) <= x. Requires a finite
    /// tail; throws when x exceeds Phi(0+) (possible only when the total mass
    /// near 0 is finite). Phi_inv(0) may be +inf.
    virtual ExtNonneg Phi_inv(double x) const = 0;

    /// Origin integral G(t) = integral of phi over (0, t]; +inf when the law
    /// is non-integrable at the origin.
    virtual ExtNonneg origin_integral(double t) const = 0;

    /// Integral of phi over [a, b), 0 <= a <= b <= +inf, computed from
    /// whichever of Phi or G is finite. Throws when neither side is finite
    /// and no override provides a direct formula.
    virtual ExtNonneg integral(double a, double b) const;

    /// d/dt log phi(t); closed form where available, else a central
    /// difference. Meaningful only where phi is smooth and positive.
    virtual double log_phi_slope(double t) const;

    /// sup { t : phi(t) > 0 }; +inf for full support.
    virtual double support_end() const { return kInf; }

    virtual LawTraits traits() const = 0;
    virtual std::string describe() const = 0;
};

using LawPtr = std::shared_ptr<const RadialLaw>;

/// phi(t) = t^(-a). a > 1: integrable tail, divergent origin; a < 1 the
/// reverse; a = 1 divergent on both sides.
LawPtr power_law(double a);

/// phi(t) = t^(-2) exp(1/t): non-increasing, strictly log-convex,
/// Phi(t) = expm1(1/t), Phi_inv(x) = 1/log1p(x).
LawPtr power_exp_law();

/// Right-continuous non-increasing step density: phi(s) = value[i] on
/// [knot[i], knot[i+1]), extended by value[0] below knot[0] and by
/// value.back() beyond knot.back(). Knots strictly increasing and positive;
/// values nonnegative and non-increasing. A trailing zero value gives compact
/// support with support_end equal to the first knot of the zero run.
LawPtr table_law(const std::vector<double>& knots, const std::vector<double>& values);

/// phi_hat = c * phi of the base law, c > 0; Phi and G scale by c and
/// Phi_inv(x) = base Phi_inv(x / c).
LawPtr scaled_law(double c, LawPtr base);

/// Arbitrary callable density with caller-declared traits; Phi/G by adaptive
/// quadrature (G eagerly +inf when declared origin-divergent), Phi_inv by
/// bracketing bisection to 1e-12 relative.
LawPtr function_law(std::function<double(double)> phi, LawTraits traits,
                    std::string label, double support_end = kInf);

/// Isoperimetric profile I(x) = phi(Phi_inv(x)), with I(0) = 0 for unbounded
/// support via phi(inf) = 0.
ExtNonneg iso_profile(const RadialLaw& law, ExtNonneg x);

/// Sampled shape validation: phi >= 0 and non-increasing on a geometric grid
/// of 1e3 points over [1e-6, 1e6]. Throws std::domain_error on violation.
void validate_law_shape(const RadialLaw& law);

} // namespace geomineq
