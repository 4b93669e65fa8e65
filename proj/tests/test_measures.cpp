#include "doctest.h"

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/exponent.hpp"
#include "geomineq/grid.hpp"
#include "geomineq/measure.hpp"

#include <cmath>

using namespace geomineq;

namespace {

const GridPtr g2 = make_grid(2, 4096);
const GridPtr g3 = make_grid(3, 4096);

DisintegratedMeasure e1_plane() {
    return homogeneous_measure(w0_constant(*g2), Exponent::finite(-1.0 / 3.0), g2);
}

DisintegratedMeasure lebesgue_plane() {
    return homogeneous_measure(w0_constant(*g2), Exponent::pos_inf(), g2);
}

} // namespace

TEST_CASE("homogeneous construction pins the dual order") {
    CHECK(*e1_plane().q_hom == doctest::Approx(-1.0));
    CHECK(*lebesgue_plane().q_hom == doctest::Approx(0.5));
    const auto mu3 =
        homogeneous_measure(w0_constant(*g3), Exponent::finite(-0.25), g3);
    CHECK(*mu3.q_hom == doctest::Approx(-1.0));
    // p outside (-1/n, 0) u (0, inf] is rejected.
    CHECK_THROWS_AS(
        (void)homogeneous_measure(w0_constant(*g2), Exponent::finite(-0.5), g2),
        std::invalid_argument);
}

TEST_CASE("plane Lebesgue masses are the classical areas") {
    const auto leb = lebesgue_plane();
    CHECK(measure_of_star(leb, StarBody::ball(g2, 2.0)) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(measure_of_star(leb, StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0})) ==
          doctest::Approx(4.0).epsilon(1e-6));
    const StarBody tri = StarBody::polygon(g2, {{2.0, 0.0}, {-1.0, 1.5}, {-1.0, -1.5}});
    CHECK(measure_of_star(leb, tri) == doctest::Approx(4.5).epsilon(1e-6));
}

TEST_CASE("inverse-cube plane measure: complements of discs weigh 2 pi / t") {
    const auto mu = e1_plane();
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const CoStar C{StarBody::ball(g2, t)};
        CHECK(measure_of_costar(mu, C) == doctest::Approx(2.0 * kPi / t).epsilon(1e-12));
    }
    // Any set with positive radius at the origin has infinite mass.
    CHECK(measure_of_star(mu, StarBody::ball(g2, 1.0)) == kInf);
}

TEST_CASE("shell masses agree with costar differences") {
    const auto mu = e1_plane();
    const StarBody a = StarBody::ball(g2, 1.0);
    const StarBody b = StarBody::ball(g2, 3.0);
    const double shell = measure_of_shell(mu, a, b);
    const double diff = measure_of_costar(mu, CoStar{a}) - measure_of_costar(mu, CoStar{b});
    CHECK(shell == doctest::Approx(diff).epsilon(1e-12));
}

TEST_CASE("dimension-3 homogeneous masses integrate the angular weights") {
    // p = -1/4, n = 3 gives q = -1: complement of the unit ball has mass
    // sum of weights x integral over (1,inf) of r^-2 dr = 4 pi.
    const auto mu = homogeneous_measure(w0_constant(*g3), Exponent::finite(-0.25), g3);
    CHECK(measure_of_costar(mu, CoStar{StarBody::ball(g3, 1.0)}) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(measure_of_costar(mu, CoStar{StarBody::ball(g3, 2.0)}) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("warped measure over the disc matches its radial law") {
    const auto mu = warped_measure(w0_constant(*g2), StarBody::ball(g2, 1.0),
                                   power_exp_law());
    // Mass of the complement of t * disc: 2 pi (e^(1/t) - 1).
    for (double t : {1.0, 2.0}) {
        CHECK(measure_of_costar(mu, CoStar{StarBody::ball(g2, t)}) ==
              doctest::Approx(2.0 * kPi * std::expm1(1.0 / t)).epsilon(1e-12));
    }
}

TEST_CASE("boundary measures recover the derivative of the dilation mass") {
    const auto mu = e1_plane();
    const ConvexBody K = ConvexBody::ball(g2, 1.0);
    // d/dt of 2 pi / t is -2 pi / t^2; the inner boundary measure of the
    // complement of tK reports the positive rate 2 pi / t^2.
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const CoStar C{StarBody::ball(g2, t)};
        CHECK(boundary_measure(mu, C, K, BoundarySide::inner) ==
              doctest::Approx(2.0 * kPi / (t * t)).epsilon(1e-9));
    }

    const auto leb = lebesgue_plane();
    const StarBody disc = StarBody::ball(g2, 2.0);
    CHECK(boundary_measure(leb, disc, K, BoundarySide::outer) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-9));
}

TEST_CASE("anisotropic boundary against a square gauge uses its support") {
    const auto leb = lebesgue_plane();
    // Perimeter of the disc measured against the unit square gauge:
    // integral of h_K(normal) over the circle of radius r = r * perimeter of
    // the polar-dual weight; for K = [-1,1]^2, h(theta) = |cos| + |sin|,
    // integral over the unit circle is 8, so the rate is 8 r.
    const ConvexBody K = ConvexBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0});
    const StarBody disc = StarBody::ball(g2, 2.0);
    CHECK(boundary_measure(leb, disc, K, BoundarySide::outer) ==
          doctest::Approx(16.0).epsilon(1e-6));
}

TEST_CASE("scaling reference bodies rescales measures by the homogeneity law") {
    Rng rng(31);
    const auto mu = e1_plane();
    const double q = *mu.q_hom;
    for (int i = 0; i < 20; ++i) {
        const double r = rng.log_uniform(0.3, 3.0);
        const double s = rng.log_uniform(0.5, 2.0);
        const double base = measure_of_costar(mu, CoStar{StarBody::ball(g2, r)});
        const double scaled = measure_of_costar(mu, CoStar{StarBody::ball(g2, s * r)});
        // mu(complement sA) = s^(1/q) mu(complement A).
        CHECK(scaled == doctest::Approx(std::pow(s, 1.0 / q) * base).epsilon(1e-10));
    }
    const IneqReport hom = check_homogeneity(mu, q, 64);
    CHECK(hom.pass);

    const auto leb = lebesgue_plane();
    CHECK(check_homogeneity(leb, *leb.q_hom, 64).pass);
    // A wrong exponent must be rejected.
    CHECK_FALSE(check_homogeneity(mu, -0.5, 16).pass);
}

TEST_CASE("angular densities: arcs and cones carve exact fractions") {
    const auto quad = homogeneous_measure(w0_arc(*g2, 0.0, kPi / 2.0),
                                          Exponent::pos_inf(), g2);
    CHECK(measure_of_star(quad, StarBody::ball(g2, 2.0)) ==
          doctest::Approx(kPi).epsilon(1e-12));

    const double inv = 1.0 / std::sqrt(2.0);
    const auto cone = homogeneous_measure(
        w0_cone(*g2, kPi / 4.0, {inv, inv, 0.0}), Exponent::pos_inf(), g2);
    CHECK(measure_of_star(cone, StarBody::ball(g2, 2.0)) ==
          doctest::Approx(kPi).epsilon(1e-3));

    // Slab recovery: eta of the full circle equals the Lebesgue arc density.
    const auto mu = e1_plane();
    std::vector<std::uint8_t> mask(g2->size(), 1);
    CHECK(eta_from_slab(mu, mask) == doctest::Approx(mu.c_eta).epsilon(1e-12));
}

TEST_CASE("mass positivity and monotonicity under inclusion") {
    const auto mu = e1_plane();
    const CoStar small{StarBody::ball(g2, 2.0)};
    const CoStar big{StarBody::ball(g2, 1.0)};
    CHECK(measure_of_costar(mu, big) > measure_of_costar(mu, small));

    const auto leb = lebesgue_plane();
    const StarBody inner = StarBody::ball(g2, 1.0);
    const StarBody outer = StarBody::fourier(g2, {1.2, {0.0, 0.1}, {}});
    CHECK(measure_of_star(leb, outer) > measure_of_star(leb, inner));
}
