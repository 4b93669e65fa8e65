#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/measure.hpp"

// Brute-force planar oracle: bit-mask rasterization on a square lattice.
// Independent of the polar/closed-form pipeline, used to cross-check it.

namespace geomineq {

/// Occupancy mask over the square window [lo, lo+(m-1)h]^2. Cell (ix, iy)
/// covers the h-square centered at (lo + ix*h, lo + iy*h); rows are y-major,
/// 64 cells per word, pad bits beyond m always zero. lo/h must be an integer
/// so that Minkowski sums land exactly on the lattice.
struct VoxelSet {
    double lo = -4.0;
    double h = 1.0 / 256.0;
    std::size_t m = 0;   // cells per side
    std::size_t wpr = 0; // words per row
    std::vector<std::uint64_t> words;

    double cx(std::size_t ix) const { return lo + static_cast<double>(ix) * h; }
    double cy(std::size_t iy) const { return lo + static_cast<double>(iy) * h; }
    double hi() const { return lo + static_cast<double>(m - 1) * h; }

    bool bit(std::size_t ix, std::size_t iy) const {
        return (words[iy * wpr + ix / 64] >> (ix % 64)) & 1u;
    }
    void set_bit(std::size_t ix, std::size_t iy) {
        words[iy * wpr + ix / 64] |= std::uint64_t(1) << (ix % 64);
    }

    std::uint64_t count() const;
    double area() const { return static_cast<double>(count()) * h * h; }
    bool same_window(const VoxelSet& o) const;
};

/// Empty mask over [lo, hi]^2; (hi-lo)/h and lo/h must be integers.
VoxelSet make_window(double lo, double hi, double h);

enum class VoxelFill {
    center, // cell occupied iff its center lies in the set
    outer   // center test padded by 1.5h; covers the true set for bodies of
            // moderate radial Lipschitz constant (one-sided certification)
};

/// Rasterize a star body (n = 2). Throws if the body does not fit in the
/// window with a one-cell margin.
VoxelSet voxelize(const StarBody& S, double lo, double hi, double h,
                  VoxelFill fill = VoxelFill::center);
VoxelSet voxelize(const ConvexBody& K, double lo, double hi, double h,
                  VoxelFill fill = VoxelFill::center);
/// Complement within the window: exactly voxel_not(voxelize(inner)).
VoxelSet voxelize(const CoStar& C, double lo, double hi, double h,
                  VoxelFill fill = VoxelFill::center);

/// Bitwise combinations on a shared window (pad bits stay zero).
VoxelSet voxel_not(const VoxelSet& a);
VoxelSet voxel_and(const VoxelSet& a, const VoxelSet& b);
VoxelSet voxel_or(const VoxelSet& a, const VoxelSet& b);
VoxelSet voxel_and_not(const VoxelSet& a, const VoxelSet& b);
/// Point reflection through the origin (window must be symmetric).
VoxelSet voxel_reflect(const VoxelSet& a);

/// {t x : x in A} by nearest-cell resampling, t > 0. Throws if the scaled
/// set escapes the window.
VoxelSet voxel_scale(const VoxelSet& a, double t);

/// Exact lattice Minkowski sum wa*A + wb*B (weights applied by voxel_scale
/// first). Escaping the window is an error unless clip is set (clipping is
/// legitimate for complements that already reach the window edge).
VoxelSet voxel_minkowski(const VoxelSet& a, const VoxelSet& b, double wa = 1.0,
                         double wb = 1.0, bool clip = false);

/// Pointwise density for Riemann summation. ball_mass(r) is the closed-form
/// mass of the Euclidean ball of radius r, used to bound the residual around
/// an origin singularity; +inf signals a non-integrable origin.
struct DensitySampler {
    std::function<double(double, double)> w;
    bool origin_singular = false;
    std::function<ExtNonneg(double)> ball_mass;
};

/// Lebesgue area sampler.
DensitySampler lebesgue_sampler();

/// Sampler for a disintegrated measure (n = 2): w(x) = w0(theta) rho_B(theta)
/// phi(r/rho_B)/r with w0, rho_B interpolated on the grid. Pass w0_exact to
/// bypass interpolation of the angular density (sharper on cone edges).
/// The measure must outlive the sampler.
DensitySampler make_density_sampler(const DisintegratedMeasure& mu,
                                    std::function<double(double)> w0_exact = {});

struct VoxelMass {
    ExtNonneg value = 0.0;
    bool singular_flagged = false; // an origin cell could not be resolved
};

/// sum over occupied cells of w(center) h^2. Occupied cells within h of the
/// origin of a singular sampler are refined 4-fold up to depth 6; what still
/// touches the singularity is bounded by ball_mass (flagged, +inf when the
/// origin mass diverges).
VoxelMass voxel_measure(const DensitySampler& w, const VoxelSet& A);

struct BoundaryEstimate {
    double value = 0.0;    // linear extrapolation of the quotients to eps = 0
    double residual = 0.0; // max relative deviation of the quotients from the fit
    bool flagged = false;  // non-monotone quotients, poor fit, or singular mass
    std::vector<double> eps;       // midpoints of consecutive schedule pairs
    std::vector<double> quotients; // shell-mass differences / eps spacing
};

/// Finite-difference anisotropic boundary measure. Shell masses
/// mu((A + eps K) \ A) (outer) or mu(A \ (A - eps K)) (inner) are differenced
/// between consecutive eps of the schedule — the lattice rasterization bias is
/// constant in eps and cancels — and the difference quotients are fit linearly
/// and extrapolated to eps = 0. Needs at least three eps values, each a few h.
BoundaryEstimate voxel_boundary(const DensitySampler& w, const VoxelSet& A,
                                const VoxelSet& K, BoundarySide side,
                                const std::vector<double>& eps_schedule);

struct GapReport {
    double gap_area = 0.0;  // area of (A+B) inside the cone not covered radially
    double tolerance = 0.0; // lattice noise scale (a few boundary rings)
    bool radial_exhausts = false; // gap within lattice noise
    double minkowski_area = 0.0;  // area of (A+B) inside the cone
    double radial_area = 0.0;     // area of the radial sum inside the cone
};

/// Compares the Minkowski sum with the radial sum inside the angular cone
/// [cone_lo, cone_hi] (radians; full plane when the span reaches 2 pi).
/// Zero gap up to lattice noise characterizes homothetic generators.
GapReport radial_vs_minkowski_gap(const StarBody& A, const StarBody& B,
                                  double cone_lo, double cone_hi, double lo,
                                  double hi, double h);

/// Binary PGM dump (occupied black, top row = highest y).
void dump_pgm(const VoxelSet& a, const std::string& path);

} // namespace geomineq
