#include "geomineq/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace geomineq {

GridPtr make_grid(int n, int resolution) {
    auto g = std::make_shared<DirectionGrid>();
    g->n = n;
    if (n == 1) {
        g->dirs = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
        g->weights = {1.0, 1.0};
        return g;
    }
    if (resolution < 2) throw std::invalid_argument("make_grid: resolution must be >= 2");
    const std::size_t N = static_cast<std::size_t>(resolution);
    if (n == 2) {
        g->dirs.resize(N);
        g->weights.assign(N, 2.0 * kPi / static_cast<double>(N));
        g->angles.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(N);
            g->angles[i] = th;
            g->dirs[i] = {std::cos(th), std::sin(th), 0.0};
        }
        return g;
    }
    if (n == 3) {
        // Fibonacci lattice: near-uniform points, equal weights.
        g->dirs.resize(N);
        g->weights.assign(N, 4.0 * kPi / static_cast<double>(N));
        const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(N);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double az = 2.0 * kPi * golden * static_cast<double>(i);
            g->dirs[i] = {r * std::cos(az), r * std::sin(az), z};
        }
        return g;
    }
    throw std::invalid_argument("make_grid: dimension must be 1, 2, or 3");
}

bool same_grid(const DirectionGrid& a, const DirectionGrid& b) {
    if (&a == &b) return true;
    if (a.n != b.n || a.size() != b.size()) return false;
    if (a.size() == 0) return true;
    // Grids are built deterministically from (n, N); spot-check a few nodes.
    const std::size_t probes[] = {0, a.size() / 3, a.size() - 1};
    for (std::size_t i : probes) {
        if (a.dirs[i] != b.dirs[i] || a.weights[i] != b.weights[i]) return false;
    }
    return true;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return same_grid(*a, *b);
}

double grid_lerp(const DirectionGrid& grid, const std::vector<double>& vals, double theta) {
    if (grid.n != 2) throw std::invalid_argument("grid_lerp: planar grids only");
    const std::size_t N = grid.size();
    const double dtheta = 2.0 * kPi / static_cast<double>(N);
    double s = theta / dtheta;
    s -= std::floor(s / static_cast<double>(N)) * static_cast<double>(N);
    std::size_t i0 = static_cast<std::size_t>(s);
    if (i0 >= N) i0 = 0;
    const double frac = s - static_cast<double>(i0);
    return vals[i0] * (1.0 - frac) + vals[(i0 + 1) % N] * frac;
}

} // namespace geomineq
