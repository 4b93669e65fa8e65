#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geomineq/body.hpp"
#include "geomineq/measure.hpp"
#include "geomineq/report.hpp"

namespace geomineq {

/// Gauge-radial test function f(x) = g(gauge_K(x)) with a piecewise-linear
/// profile g on radius knots 0 = r_0 < r_1 < ... < r_m, g(0) = 0, and g
/// constant beyond r_m. For such f the gradient modulus against the K-gauge
/// is exactly |g'|, which keeps every norm below certifiable.
struct RadialFunction {
    ConvexBody gauge;
    std::vector<double> knots;  // knots[0] == 0, strictly increasing
    std::vector<double> values; // values[0] == 0, finite

    static RadialFunction make(ConvexBody gauge, std::vector<double> knots,
                               std::vector<double> values);
    double value(double r) const;
    double max_abs() const; // sup |g|, attained at a knot
};

/// |g'| on open knot intervals, the max of the two adjacent slopes at a knot,
/// 0 beyond the last knot. r must be nonnegative.
double grad_modulus(const RadialFunction& f, double r);

/// integral of the gradient modulus: sum over knot intervals of |slope| times
/// the mu-mass of the gauge annulus. +inf as soon as a nonzero slope meets an
/// annulus of infinite mass. The gauge must live on mu's grid; for a
/// non-homogeneous mu it must additionally be homothetic to the measure body,
/// since only then are annulus masses available in closed form.
ExtNonneg total_gradient_mass(const RadialFunction& f, const DisintegratedMeasure& mu);

/// Increasing profile I with I(0) = 0 and I(inf) = inf for the weak
/// quasi-norms: the t-integrand is I(mu({|f| >= t})).
struct QuasiNormProfile {
    std::function<ExtNonneg(ExtNonneg)> I;
    std::string label;
};

/// I(x) = x^{1/alpha}, alpha > 0.
QuasiNormProfile lorentz_profile(double alpha);

/// The measure's own isoperimetric profile against the given gauge:
/// x -> boundary-measure lower bound for sets of mass x.
QuasiNormProfile measure_profile(const DisintegratedMeasure& mu, const ConvexBody& gauge);

struct WeakNorms {
    double L_Phi_1 = 0.0;   // integral over t of I(mu({|f| >= t}))
    double L_Phi_inf = 0.0; // sup over t of t * I(mu({|f| >= t}))
    double L_beta = 0.0;    // (integral of |f|^beta dmu)^{1/beta}; NaN if no beta
    double L_1 = 0.0;       // integral of |f| dmu
    double L_inf = 0.0;     // sup |f|
};

/// Level-set masses in closed form from the measure's radial structure;
/// t-integrals by exact splitting at the profile's critical values plus
/// adaptive quadrature on each piece. Passing alpha replaces the profile by
/// lorentz_profile(alpha). Throws when a positive level set has infinite
/// mass.
WeakNorms weak_norms(const RadialFunction& f, const DisintegratedMeasure& mu,
                     const QuasiNormProfile& profile, std::optional<double> alpha = {},
                     std::optional<double> beta = {});

enum class SobolevVariant { weak_L1, L_beta, nash, coarea, functional_equiv };

/// Functional counterparts of the isoperimetric inequalities, evaluated with
/// the module's exact paths.
///   weak_L1:          grad mass >= C1 * L^{alpha,1},  alpha = 1/(1-q)
///   L_beta:           grad mass >= C1 ((alpha-beta)/alpha)^{1/beta} * L_beta
///                     (diagnostic: reported, never asserted; beta defaults
///                     to alpha/2)
///   nash:             L_1 <= C2 * (grad mass)^alpha * L_inf^{1-alpha}
///   coarea:           grad mass >= integral over t of the boundary measure
///                     of the level sets
///   functional_equiv: grad mass >= L^{Phi,1} with the measure's own profile
/// C1 = -(1/q) mu({gauge >= 1})^q and C2 = C1^{-alpha} are recomputed from mu
/// on every call. weak_L1, L_beta and nash require a homogeneous mu with
/// q < 0; coarea and functional_equiv also accept q > 0 and warped measures.
IneqReport check_sobolev(const RadialFunction& f, const DisintegratedMeasure& mu,
                         SobolevVariant variant, std::optional<double> beta = {},
                         double rel_tolerance = 1e-6);

/// Nonnegative step function on the line: value[i] on [edges[i], edges[i+1])
/// and far_value outside [edges.front(), edges.back()].
struct StepFunction1D {
    std::vector<double> edges;
    std::vector<double> values;
    double far_value = 0.0;
};

/// Nonnegative cell function on the square window [lo, lo+(m-1)h]^2 with the
/// VoxelSet cell layout (y-major, cell centers at lo + i*h), and far_value
/// outside the window.
struct GridFunction2D {
    double lo = -4.0;
    double h = 1.0 / 128.0;
    std::size_t m = 0;
    std::vector<double> values; // m*m, index iy*m + ix
    double far_value = 0.0;
};

/// 1 outside the body, 0 inside (cell-center test), far_value 1: the
/// indicator of the complement, for the reduction to the set inequality.
GridFunction2D indicator_complement(const StarBody& A, double lo, double hi, double h);

/// Functional complemented Brunn-Minkowski: builds the extremal
/// h(z) = inf { max(f(x), g(y)) : lambda x + (1-lambda) y = z } through its
/// sublevel sets {h < t} = lambda {f < t} + (1-lambda) {g < t} and asserts
///   integral h dmu <= (lambda (int f)^q + (1-lambda) (int g)^q)^{1/q},
/// q < 0. The 1-D overload sums interval unions exactly; the 2-D overload
/// combines sublevel masks on the voxel lattice. Both require matching
/// far_values and throw when a positive level set of f or g has infinite
/// mass.
IneqReport functional_cbm(const StepFunction1D& f, const StepFunction1D& g, double lambda,
                          const DisintegratedMeasure& mu, double q,
                          double rel_tolerance = 1e-9);
IneqReport functional_cbm(const GridFunction2D& f, const GridFunction2D& g, double lambda,
                          const DisintegratedMeasure& mu, double q,
                          double rel_tolerance = 1e-3);

} // namespace geomineq
