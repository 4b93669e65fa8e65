#pragma once

#include <vector>

#include "geomineq/radial_law.hpp"
#include "geomineq/report.hpp"

namespace geomineq {

/// Finite union of disjoint sorted intervals [lo, hi) inside [0, inf); the
/// last component may be a half-line (hi = +inf). Construction merges
/// touching or overlapping pieces, so the representation is canonical.
class IntervalUnion {
public:
    struct Interval {
        double lo;
        double hi; // exclusive; kInf allowed
    };

    IntervalUnion() = default;
    static IntervalUnion from_intervals(std::vector<Interval> parts);
    static IntervalUnion halfline(double z); // [z, inf)

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t component_count() const { return parts_.size(); }

    ExtNonneg length() const;

    /// Minkowski dilation by [0, d]: every component grows by d to the right.
    IntervalUnion dilate_right(double d) const;

    /// [0, inf) minus this union.
    IntervalUnion complement_in_halfline() const;

    static IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
    static IntervalUnion difference(const IntervalUnion& a, const IntervalUnion& b);

private:
    std::vector<Interval> parts_;
};

/// Sum of the law's exact integrals over the components.
ExtNonneg measure_of_union(const RadialLaw& law, const IntervalUnion& u);

/// Inner boundary measure of C against the dilation body [0, b]: the
/// complement dilated right by eps*b eats [t_i, t_i + eps*b) at every left
/// endpoint t_i > 0 of C, so the limit is b * sum of phi(t_i).
ExtNonneg boundary_1d(const RadialLaw& law, const IntervalUnion& C, double b);

/// One-sided complemented Brunn-Minkowski in 1-D for the dilation A + t[0,b]:
/// claims mass(complement of A + t[0,b]) <= Phi(Phi_inv(mass(complement A)) +
/// t Phi_inv(mass(complement [0,b]))). The left side uses exact interval
/// dilation; both sides use closed-form integrals.
IneqReport ocbm_1d(const RadialLaw& law, const IntervalUnion& A, double b, double t,
                   double rel_tolerance = 1e-10);

struct ConvexityCheck {
    bool pass = false;
    bool strict = false;
    double min_defect = 0.0; // min over probes of (f(s)+f(t))/2 - f(mid)
};

/// Midpoint convexity of log phi sampled on a geometric grid; strict when the
/// minimal defect is positive.
ConvexityCheck check_logconvex(const RadialLaw& law, int grid_points = 400,
                               double lo = 1e-3, double hi = 1e3);

struct FConcavityCheck {
    bool pass = false;           // F midpoint-concave within tolerance
    double min_defect = 0.0;     // min over probes of F(mid) - (F(x)+F(y))/2
    bool iprime_ok = false;      // numeric I' matches -(log phi)' after Phi_inv
    double iprime_max_err = 0.0; // worst relative mismatch
};

/// Concavity of F(x) = Phi(Phi_inv(x) + t0) on a grid of masses, plus a
/// finite-difference check of the profile derivative identity against the
/// law's log-slope (tolerance 1e-6).
FConcavityCheck check_F_concavity(const RadialLaw& law, double t0, int grid_points = 200);

struct HalfLineDiagnosis {
    bool is_halfline = false;   // C matches the equal-mass half-line up to 1e-9 mass
    double offending_mass = 0.0; // mass of the symmetric difference with that half-line
    bool equality_holds = false; // boundary == b * profile(mass) within 1e-9
    double mass = 0.0;
    double boundary = 0.0;
    double profile_bound = 0.0; // b * iso_profile(mass)
};

/// Equality-case diagnosis for the 1-D isoperimetric inequality: equality
/// forces C to be a right half-line; both facts are measured, not assumed.
HalfLineDiagnosis equality_shape_1d(const RadialLaw& law, const IntervalUnion& C, double b);

} // namespace geomineq
