#include "doctest.h"

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/exponent.hpp"
#include "geomineq/grid.hpp"
#include "geomineq/measure.hpp"
#include "geomineq/voxel.hpp"

#include <cmath>

using namespace geomineq;

namespace {
const GridPtr g2 = make_grid(2, 4096);
const double kH = 1.0 / 128.0;
}

TEST_CASE("window construction enforces lattice alignment") {
    const VoxelSet w = make_window(-4.0, 4.0, kH);
    CHECK(w.m == 1025);
    CHECK(w.hi() == doctest::Approx(4.0));
    CHECK(w.count() == 0);
    CHECK_THROWS_AS((void)make_window(-4.0, 4.0, 0.3), std::invalid_argument);
}

TEST_CASE("rasterized areas converge to descriptor areas") {
    const StarBody disc = StarBody::ball(g2, 1.5);
    const VoxelSet v = voxelize(disc, -4.0, 4.0, kH);
    CHECK(v.area() == doctest::Approx(kPi * 2.25).epsilon(2e-3));

    const StarBody box = StarBody::box(g2, {-1.0, -0.5, 0.0}, {2.0, 1.0, 0.0});
    const VoxelSet vb = voxelize(box, -4.0, 4.0, kH);
    CHECK(vb.area() == doctest::Approx(4.5).epsilon(2e-3));

    // Outer fill dominates center fill.
    const VoxelSet vo = voxelize(disc, -4.0, 4.0, kH, VoxelFill::outer);
    CHECK(vo.count() >= v.count());
    CHECK(voxel_and_not(v, vo).count() == 0);
}

TEST_CASE("bit algebra behaves like set algebra") {
    const VoxelSet a = voxelize(StarBody::ball(g2, 1.0), -4.0, 4.0, kH);
    const VoxelSet b = voxelize(StarBody::box(g2, {-2.0, -0.25, 0.0}, {2.0, 0.25, 0.0}),
                                -4.0, 4.0, kH);
    const VoxelSet u = voxel_or(a, b);
    const VoxelSet i = voxel_and(a, b);
    CHECK(u.count() + i.count() == a.count() + b.count());
    CHECK(voxel_and_not(a, a).count() == 0);
    const VoxelSet na = voxel_not(a);
    CHECK(na.count() + a.count() == a.m * a.m);
    // Complement of the complement is the set.
    CHECK(voxel_and_not(voxel_not(na), a).count() == 0);

    // Reflection through the origin fixes symmetric sets.
    CHECK(voxel_and_not(voxel_reflect(a), a).count() == 0);
}

TEST_CASE("lattice Minkowski sums match closed forms") {
    const VoxelSet a = voxelize(StarBody::ball(g2, 1.0), -4.0, 4.0, kH);
    const VoxelSet b = voxelize(StarBody::ball(g2, 0.5), -4.0, 4.0, kH);
    const VoxelSet s = voxel_minkowski(a, b);
    CHECK(s.area() == doctest::Approx(kPi * 2.25).epsilon(5e-3));

    // Steiner: square [-1,1]^2 plus unit disc.
    const VoxelSet sq = voxelize(StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}),
                                 -4.0, 4.0, kH);
    const VoxelSet st = voxel_minkowski(sq, a);
    CHECK(st.area() == doctest::Approx(12.0 + kPi).epsilon(5e-3));

    // Scaling by 0.5 then summing equals the weighted sum.
    const VoxelSet w = voxel_minkowski(a, a, 0.5, 0.5);
    CHECK(w.area() == doctest::Approx(kPi).epsilon(5e-3));

    // Escape without clip throws, with clip it saturates.
    const VoxelSet big = voxelize(StarBody::ball(g2, 3.0), -4.0, 4.0, kH);
    CHECK_THROWS_AS((void)voxel_minkowski(big, big), std::invalid_argument);
    const VoxelSet clipped = voxel_minkowski(big, big, 1.0, 1.0, true);
    CHECK(clipped.count() > big.count());
}

TEST_CASE("density sampling integrates masses on the lattice") {
    const VoxelSet disc2 = voxelize(StarBody::ball(g2, 2.0), -4.0, 4.0, kH);
    const VoxelMass a = voxel_measure(lebesgue_sampler(), disc2);
    CHECK(a.value == doctest::Approx(4.0 * kPi).epsilon(2e-3));

    // Inverse-cube density: the complement of the unit disc inside the window
    // carries 2 pi - (boundary spill outside the window).
    const auto mu = homogeneous_measure(w0_constant(*g2), Exponent::finite(-1.0 / 3.0), g2);
    const DensitySampler w = make_density_sampler(mu);
    const VoxelSet hole = voxelize(CoStar{StarBody::ball(g2, 1.0)}, -4.0, 4.0, kH);
    const VoxelMass inside = voxel_measure(w, hole);
    const double outside = measure_of_costar(
        mu, CoStar{StarBody::box(g2, {-4.0, -4.0, 0.0}, {4.0, 4.0, 0.0})});
    CHECK(inside.value + outside == doctest::Approx(2.0 * kPi).epsilon(2e-3));
    CHECK_FALSE(inside.singular_flagged);

    // A set touching the singular origin is flagged infinite.
    const VoxelSet full = voxelize(StarBody::ball(g2, 1.0), -4.0, 4.0, kH);
    const VoxelMass sing = voxel_measure(w, full);
    CHECK(sing.value == kInf);
}

TEST_CASE("finite-difference boundary estimates match exact rates") {
    const auto mu = homogeneous_measure(w0_constant(*g2), Exponent::finite(-1.0 / 3.0), g2);
    const DensitySampler w = make_density_sampler(mu);
    const VoxelSet hole = voxelize(CoStar{StarBody::ball(g2, 1.0)}, -4.0, 4.0, kH);
    const VoxelSet gauge = voxelize(StarBody::ball(g2, 1.0), -4.0, 4.0, kH);
    const BoundaryEstimate est =
        voxel_boundary(w, hole, gauge, BoundarySide::inner,
                       {4.0 * kH, 8.0 * kH, 12.0 * kH, 16.0 * kH});
    CHECK_FALSE(est.flagged);
    // Exact rate at the unit disc is 2 pi.
    CHECK(est.value == doctest::Approx(2.0 * kPi).epsilon(2e-2));
}

TEST_CASE("radial and Minkowski sums coincide exactly for homothets") {
    const StarBody a = StarBody::ball(g2, 1.0);
    const StarBody b = StarBody::ball(g2, 2.0);
    const GapReport g = radial_vs_minkowski_gap(a, b, 0.0, 2.0 * kPi, -4.0, 4.0, kH);
    CHECK(g.radial_exhausts);
    CHECK(g.gap_area <= g.tolerance);

    // A square against a disc leaves a genuine gap near the corners.
    const StarBody sq = StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0});
    const GapReport g2r = radial_vs_minkowski_gap(sq, a, 0.0, 2.0 * kPi, -4.0, 4.0, kH);
    CHECK_FALSE(g2r.radial_exhausts);
    CHECK(g2r.gap_area > 10.0 * g2r.tolerance);
}
