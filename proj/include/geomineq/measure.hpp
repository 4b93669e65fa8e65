#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/exponent.hpp"
#include "geomineq/grid.hpp"
#include "geomineq/radial_law.hpp"
#include "geomineq/report.hpp"

namespace geomineq {

/// A measure disintegrated in polar form: an atomic angular measure eta on
/// the direction grid and a shared radial law, rescaled per direction by
/// rho_B. Per-ray radial density: phi_theta(r) = phi(r / rho_B(theta)) / rho_B(theta).
struct DisintegratedMeasure {
    GridPtr grid;
    std::vector<double> eta; // per-direction angular weights, >= 0
    LawPtr law;              // raw radial law phi
    LawPtr law_hat;          // normalized law c_eta * phi (unit angular mass form)
    std::vector<double> rho_B;
    double c_eta = 0.0;            // sum of eta
    std::optional<double> q_hom;   // homogeneity exponent, set for homogeneous measures

    int n() const { return grid->n; }
    std::size_t size() const { return grid->size(); }
};

/// Measure with density w0(theta) r^{1/q - 1} along each ray, q = dual of p.
/// w0 holds per-direction values; zero entries carve out a cone.
DisintegratedMeasure homogeneous_measure(const std::vector<double>& w0, const Exponent& p,
                                         GridPtr grid);

/// Measure with per-ray density phi(r/rho_B)/rho_B and angular weights
/// w0(theta) rho_B(theta)^n sigma; stores both the raw and the normalized law.
DisintegratedMeasure warped_measure(const std::vector<double>& w0, const StarBody& B,
                                    LawPtr law);

/// mu(A) for a star body; +infinity as soon as the law is non-integrable at
/// the origin and A has positive radius on a ray with positive weight.
ExtNonneg measure_of_star(const DisintegratedMeasure& mu, const StarBody& A);

/// mu of the complement of a star body: sum_i eta_i Phi(rho_inner/rho_B).
ExtNonneg measure_of_costar(const DisintegratedMeasure& mu, const CoStar& C);

/// mu of the radial shell between two nested star bodies (lo inside hi).
ExtNonneg measure_of_shell(const DisintegratedMeasure& mu, const StarBody& lo,
                           const StarBody& hi);

enum class BoundarySide { inner, outer };
enum class BoundaryMode {
    auto_detect,
    homothet_exact, // hole (or set) is t*K: sum_i eta_i phi(t rho_K/rho_B) rho_K/rho_B
    polygon_edge,   // n=2, uniform angular density: per-edge Gauss quadrature of w h_K(nu)
    radial_shell    // n=2 grid quadrature of the first-order radial shift
};

/// Anisotropic boundary measure of a co-star (the hole erodes by epsilon K to
/// first order). Matches -d/dt mu(complement of tK) in exact mode.
ExtNonneg boundary_measure(const DisintegratedMeasure& mu, const CoStar& C,
                           const ConvexBody& K, BoundarySide side,
                           BoundaryMode mode = BoundaryMode::auto_detect);

/// Anisotropic boundary measure of a star body (grown by epsilon K).
ExtNonneg boundary_measure(const DisintegratedMeasure& mu, const StarBody& A,
                           const ConvexBody& K, BoundarySide side,
                           BoundaryMode mode = BoundaryMode::auto_detect);

/// Max over random bodies and lambda in {0.5, 2, 3} of the relative defect
/// |mu(lambda A)^q - lambda mu(A)^q| / (lambda mu(A)^q). Bodies are co-stars
/// when the law diverges at the origin, stars otherwise.
IneqReport check_homogeneity(const DisintegratedMeasure& mu, double q, int trials,
                             std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Evaluator form, for measures not representable as one DisintegratedMeasure
/// (e.g. mixtures): mass(body) must return the mass of the body itself for
/// q > 0 evaluators and of its complement for q < 0 evaluators.
IneqReport check_homogeneity(const std::function<ExtNonneg(const StarBody&)>& mass,
                             double q, int trials, const GridPtr& grid,
                             std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Recovers eta(A) of an angular subset from the measure of the radial slab
/// (1,2]*A: eta(A) = mu(slab) / (q (2^{1/q} - 1)). Homogeneous measures only.
double eta_from_slab(const DisintegratedMeasure& mu, const std::vector<std::uint8_t>& mask);

/// Per-direction angular density helpers.
std::vector<double> w0_constant(const DirectionGrid& grid, double value = 1.0);
/// n=2: exact coverage fraction of the arc [theta_lo, theta_hi] per angular cell.
std::vector<double> w0_arc(const DirectionGrid& grid, double theta_lo, double theta_hi);
/// Indicator of the cone of half-angle alpha around axis; exact cell coverage
/// for n=2, node membership for n=3.
std::vector<double> w0_cone(const DirectionGrid& grid, double half_angle,
                            const Vec3& axis = {1.0, 0.0, 0.0});

} // namespace geomineq
