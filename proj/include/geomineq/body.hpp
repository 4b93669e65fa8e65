#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "geomineq/grid.hpp"

namespace geomineq {

/// Exact shape descriptors. Bodies carry one when closed-form radial/support
/// evaluation is available; grid values are always materialized as well.
struct BallDesc {
    double r = 1.0; // centered at the origin
};
struct BoxDesc {
    Vec3 lo{0.0, 0.0, 0.0};
    Vec3 hi{0.0, 0.0, 0.0}; // requires lo <= 0 <= hi componentwise
};
struct PolygonDesc {
    std::vector<std::array<double, 2>> verts; // convex, strictly ccw, origin strictly inside
};
struct FourierDesc {
    double a0 = 1.0;
    std::vector<double> cos_coef; // rho(theta) = a0 + sum_k cos_coef[k-1] cos(k theta) + ...
    std::vector<double> sin_coef;
};
using Descriptor = std::variant<std::monostate, BallDesc, BoxDesc, PolygonDesc, FourierDesc>;

/// Star-shaped body around the origin: per-direction radii rho(theta_i) >= 0
/// on a direction grid (infinite radii are reserved for cone-like co-star
/// inners). Descriptor bodies evaluate rho exactly in any direction.
class StarBody {
public:
    StarBody(GridPtr grid, std::vector<double> rho, Descriptor desc = {});

    static StarBody ball(GridPtr grid, double r);
    static StarBody box(GridPtr grid, const Vec3& lo, const Vec3& hi);
    static StarBody polygon(GridPtr grid, std::vector<std::array<double, 2>> verts);
    static StarBody fourier(GridPtr grid, FourierDesc f);

    const DirectionGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& rho() const { return rho_; }
    double rho(std::size_t i) const { return rho_[i]; }
    const Descriptor& descriptor() const { return desc_; }

    /// Radius along an arbitrary unit direction: descriptor-exact, else
    /// interpolated (linear in angle for n=2, inverse-angle blend of the three
    /// nearest nodes for n=3).
    double rho_in_direction(const Vec3& u) const;

    /// n=2 helpers on the angle parametrization.
    double rho_at_angle(double theta) const;
    double rho_prime_at_angle(double theta) const; // analytic for descriptors, else central difference

private:
    GridPtr grid_;
    std::vector<double> rho_;
    Descriptor desc_;
};

/// Convex body: star data plus exact support values h(theta_i); Minkowski
/// sums run on supports, measures on radii.
class ConvexBody {
public:
    static ConvexBody ball(GridPtr grid, double r);
    static ConvexBody box(GridPtr grid, const Vec3& lo, const Vec3& hi);
    static ConvexBody polygon(GridPtr grid, std::vector<std::array<double, 2>> verts);
    /// n=2: radial function recovered from the support values (outer envelope
    /// of the touching lines at grid resolution).
    static ConvexBody from_support(GridPtr grid, std::vector<double> support,
                                   Descriptor desc = {});

    const DirectionGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& rho() const { return rho_; }
    double rho(std::size_t i) const { return rho_[i]; }
    const std::vector<double>& support() const { return support_; }
    double support(std::size_t i) const { return support_[i]; }
    const Descriptor& descriptor() const { return desc_; }

    double rho_in_direction(const Vec3& u) const;
    double support_in_direction(const Vec3& v) const; // positively homogeneous in v

    StarBody as_star() const { return StarBody(grid_, rho_, desc_); }

    /// Direct construction; validates sizes, nonnegativity and rho <= support.
    ConvexBody(GridPtr grid, std::vector<double> rho, std::vector<double> support,
               Descriptor desc);

private:
    GridPtr grid_;
    std::vector<double> rho_;
    std::vector<double> support_;
    Descriptor desc_;
};

/// Complement of a star body: the set { r theta : r >= rho_inner(theta) }.
struct CoStar {
    StarBody inner;
};

/// Minkowski functional of the body: ||x|| = |x| / rho(x/|x|); gauge(0) = 0.
double gauge(const StarBody& K, const Vec3& x);
double gauge(const ConvexBody& K, const Vec3& x);

StarBody scale(const StarBody& S, double t);
ConvexBody scale(const ConvexBody& K, double t);
CoStar scale(const CoStar& C, double t);

/// wa*A + wb*B: supports add exactly; descriptors are combined when a closed
/// form exists (balls, boxes, polygon merges, ball+box in n=3), otherwise the
/// radial function is recovered from the summed support (n=2).
ConvexBody minkowski_sum(const ConvexBody& A, const ConvexBody& B, double wa = 1.0,
                         double wb = 1.0);

/// wa*A +_r wb*B: pointwise combination of radial functions.
StarBody radial_sum(const StarBody& A, const StarBody& B, double wa = 1.0, double wb = 1.0);

/// Lebesgue volume of a descriptor in closed form; nullopt without a usable
/// descriptor.
std::optional<double> descriptor_volume(const Descriptor& d, int n);

/// Perimeter of a convex descriptor, n=2.
std::optional<double> descriptor_perimeter(const Descriptor& d);

/// Exact Lebesgue volume of wa*A + wb*B when the descriptor pair admits one
/// (homothets, ball/box/polygon algebra, Steiner formula for body + ball).
std::optional<double> minkowski_volume_closed_form(const ConvexBody& A, const ConvexBody& B,
                                                   double wa, double wb);

/// n=2 outer radial envelope of a support function: rho(theta_i) =
/// min_j h_j / cos(theta_i - theta_j); never below the true radial function.
std::vector<double> radial_from_support(const DirectionGrid& grid,
                                        const std::vector<double>& h);

/// Support values of (the convex hull of) a star body at the grid directions.
std::vector<double> star_hull_support(const StarBody& S);

/// Support of (the convex hull of) a star body in one direction: max over the
/// grid boundary points, descriptor-exact for convex descriptors.
double star_support_in_direction(const StarBody& S, const Vec3& v);

/// area(hull) - area(body) for n=2 star bodies (polygonal at grid resolution).
double convexity_deficit_area(const StarBody& S);

/// Support values translated by b: h(theta_i) + <b, theta_i>.
std::vector<double> translate_support(const ConvexBody& K, const Vec3& b);

/// Polygon view of a polygon or planar box descriptor; nullopt otherwise.
std::optional<PolygonDesc> descriptor_as_polygon(const Descriptor& d);

} // namespace geomineq
