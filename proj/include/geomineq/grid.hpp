#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "geomineq/common.hpp"

namespace geomineq {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

/// Quadrature nodes on S^(n-1): unit directions theta_i with positive weights
/// sigma_i summing to the sphere's surface measure (2, 2pi, 4pi). n = 1 uses
/// the two atoms +-1; n = 2 uniform angles starting at 0 (exact for
/// trigonometric polynomials of degree < N); n = 3 a Fibonacci lattice with
/// equal weights.
struct DirectionGrid {
    int n = 2;
    std::vector<Vec3> dirs;
    std::vector<double> weights;
    std::vector<double> angles; // n = 2 only: theta_i = 2*pi*i/N

    std::size_t size() const { return dirs.size(); }
};

using GridPtr = std::shared_ptr<const DirectionGrid>;

GridPtr make_grid(int n, int resolution);

/// True when the two grids are usable interchangeably (same object or same
/// construction).
bool same_grid(const DirectionGrid& a, const DirectionGrid& b);
bool same_grid(const GridPtr& a, const GridPtr& b);

/// n=2: periodic linear interpolation of per-node values at an angle.
double grid_lerp(const DirectionGrid& grid, const std::vector<double>& vals, double theta);

} // namespace geomineq
