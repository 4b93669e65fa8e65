#include "doctest.h"

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/grid.hpp"
#include "geomineq/verify.hpp"

#include <cmath>

using namespace geomineq;

namespace {
const GridPtr g2 = make_grid(2, 4096);
const GridPtr g3 = make_grid(3, 4096);
}

TEST_CASE("direction grids integrate constants exactly") {
    double total2 = 0.0;
    for (double w : g2->weights) total2 += w;
    CHECK(total2 == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    double total3 = 0.0;
    for (double w : g3->weights) total3 += w;
    CHECK(total3 == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    const GridPtr g1 = make_grid(1, 2);
    CHECK(g1->size() == 2);
    CHECK(g1->dirs[0][0] == 1.0);
    CHECK(g1->dirs[1][0] == -1.0);
}

TEST_CASE("descriptor bodies evaluate radius and support exactly off-grid") {
    const ConvexBody disc = ConvexBody::ball(g2, 1.5);
    const Vec3 u{std::cos(0.123), std::sin(0.123), 0.0};
    CHECK(disc.rho_in_direction(u) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(disc.support_in_direction(u) == doctest::Approx(1.5).epsilon(1e-15));

    const ConvexBody box = ConvexBody::box(g2, {-1.0, -0.5, 0.0}, {2.0, 1.0, 0.0});
    // Support of a box: h(v) = max over corners of <v, corner>.
    CHECK(box.support_in_direction({1.0, 0.0, 0.0}) == doctest::Approx(2.0));
    CHECK(box.support_in_direction({-1.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(box.support_in_direction({0.0, -1.0, 0.0}) == doctest::Approx(0.5));
    // Radial hit of the corner (2, 1): rho = hypot(2, 1) along that ray.
    const double len = std::hypot(2.0, 1.0);
    CHECK(box.rho_in_direction({2.0 / len, 1.0 / len, 0.0}) ==
          doctest::Approx(len).epsilon(1e-12));

    const ConvexBody tri =
        ConvexBody::polygon(g2, {{2.0, 0.0}, {-1.0, 1.5}, {-1.0, -1.5}});
    CHECK(tri.support_in_direction({-1.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(tri.rho_in_direction({1.0, 0.0, 0.0}) == doctest::Approx(2.0));
}

TEST_CASE("gauge is the Minkowski functional") {
    const StarBody disc = StarBody::ball(g2, 2.0);
    CHECK(gauge(disc, {1.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(gauge(disc, {0.0, 0.0, 0.0}) == 0.0);
    const StarBody box = StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0});
    CHECK(gauge(box, {3.0, 3.0, 0.0}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(gauge(box, {0.5, 0.25, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaling acts linearly on radii and supports") {
    const ConvexBody tri =
        ConvexBody::polygon(g2, {{2.0, 0.0}, {-1.0, 1.5}, {-1.0, -1.5}});
    const ConvexBody half = scale(tri, 0.5);
    for (std::size_t i = 0; i < g2->size(); i += 137) {
        CHECK(half.rho(i) == doctest::Approx(0.5 * tri.rho(i)).epsilon(1e-14));
        CHECK(half.support(i) == doctest::Approx(0.5 * tri.support(i)).epsilon(1e-14));
    }
}

TEST_CASE("Minkowski sums add supports exactly and keep descriptors") {
    const ConvexBody a = ConvexBody::ball(g2, 1.0);
    const ConvexBody b = ConvexBody::ball(g2, 2.0);
    const ConvexBody s = minkowski_sum(a, b, 0.25, 0.75);
    CHECK(std::holds_alternative<BallDesc>(s.descriptor()));
    CHECK(s.rho(17) == doctest::Approx(1.75).epsilon(1e-14));

    const ConvexBody box = ConvexBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0});
    const ConvexBody sb = minkowski_sum(box, a);
    // Rounded square: support adds, radius along the diagonal is sqrt2 + 1.
    CHECK(sb.support_in_direction({1.0, 0.0, 0.0}) == doctest::Approx(2.0));
    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(sb.rho_in_direction({inv, inv, 0.0}) == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-9));
}

TEST_CASE("radial sums combine star radii pointwise") {
    const StarBody a = StarBody::ball(g2, 1.0);
    const StarBody f = StarBody::fourier(g2, {1.0, {0.0, 0.0, 0.25}, {}});
    const StarBody s = radial_sum(a, f, 0.5, 0.5);
    for (std::size_t i = 0; i < g2->size(); i += 251)
        CHECK(s.rho(i) == doctest::Approx(0.5 * a.rho(i) + 0.5 * f.rho(i)).epsilon(1e-14));
}

TEST_CASE("closed-form volumes match the classics") {
    CHECK(*descriptor_volume(BallDesc{2.0}, 2) == doctest::Approx(4.0 * kPi));
    CHECK(*descriptor_volume(BallDesc{1.0}, 3) == doctest::Approx(4.0 * kPi / 3.0));
    CHECK(*descriptor_volume(BoxDesc{{-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}}, 2) ==
          doctest::Approx(4.0));
    PolygonDesc tri{{{2.0, 0.0}, {-1.0, 1.5}, {-1.0, -1.5}}};
    CHECK(*descriptor_volume(tri, 2) == doctest::Approx(4.5));
    CHECK(*descriptor_perimeter(BallDesc{1.0}) == doctest::Approx(2.0 * kPi));

    // Steiner: area(box + t disc) = area + perim t + pi t^2.
    const ConvexBody box = ConvexBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0});
    const ConvexBody disc = ConvexBody::ball(g2, 1.0);
    const auto v = minkowski_volume_closed_form(box, disc, 1.0, 1.0);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(4.0 + 8.0 + kPi));
}

TEST_CASE("convexity classification separates stars from convex bodies") {
    CHECK(is_convex_star(StarBody::ball(g2, 1.0)));
    CHECK(is_convex_star(StarBody::box(g2, {-1.0, -2.0, 0.0}, {1.0, 0.5, 0.0})));
    // Mild Fourier wiggle stays convex, a strong third harmonic does not.
    CHECK(is_convex_star(StarBody::fourier(g2, {1.0, {0.02}, {}})));
    CHECK_FALSE(is_convex_star(StarBody::fourier(g2, {1.0, {0.0, 0.0, 0.25}, {}})));

    const StarBody flower = StarBody::fourier(g2, {1.0, {0.0, 0.0, 0.25}, {}});
    CHECK(convexity_deficit_area(flower) > 1e-3);
    CHECK(convexity_deficit_area(StarBody::ball(g2, 1.0)) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS((void)star_to_convex(flower), std::invalid_argument);

    // Convex round-trip through the support representation.
    const StarBody mild = StarBody::fourier(g2, {1.0, {0.02}, {}});
    const ConvexBody back = star_to_convex(mild);
    for (std::size_t i = 0; i < g2->size(); i += 313)
        CHECK(back.rho(i) == doctest::Approx(mild.rho(i)).epsilon(1e-6));
}

TEST_CASE("support envelope reconstruction never underestimates") {
    const ConvexBody tri =
        ConvexBody::polygon(g2, {{2.0, 0.0}, {-1.0, 1.5}, {-1.0, -1.5}});
    const auto rho = radial_from_support(*g2, tri.support());
    for (std::size_t i = 0; i < g2->size(); ++i) {
        CHECK(rho[i] >= tri.rho(i) - 1e-12);
        CHECK(rho[i] <= tri.rho(i) + 1e-6 * (1.0 + tri.rho(i)));
    }
}

TEST_CASE("body validation rejects malformed inputs") {
    CHECK_THROWS_AS((void)StarBody::ball(g2, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)StarBody::box(g2, {0.5, -1.0, 0.0}, {1.0, 1.0, 0.0}),
                    std::invalid_argument);
    // Clockwise polygon and origin-outside polygon are rejected.
    CHECK_THROWS_AS((void)ConvexBody::polygon(g2, {{2.0, 0.0}, {-1.0, -1.5}, {-1.0, 1.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ConvexBody::polygon(g2, {{2.0, 1.0}, {3.0, 1.0}, {2.5, 2.0}}),
                    std::invalid_argument);
    // Fourier radius must stay positive.
    CHECK_THROWS_AS((void)StarBody::fourier(g2, {1.0, {1.5}, {}}), std::invalid_argument);
}

TEST_CASE("translated supports shift by the linear term") {
    const ConvexBody disc = ConvexBody::ball(g2, 1.0);
    const auto h = translate_support(disc, {0.5, -0.25, 0.0});
    for (std::size_t i = 0; i < g2->size(); i += 409) {
        const auto& u = g2->dirs[i];
        CHECK(h[i] == doctest::Approx(1.0 + 0.5 * u[0] - 0.25 * u[1]).epsilon(1e-14));
    }
}

TEST_CASE("random body samplers produce valid deterministic bodies") {
    Rng rng(77);
    for (int i = 0; i < 50; ++i) {
        const ConvexBody K = random_convex_body(g2, rng);
        CHECK(is_convex_star(K.as_star(), 1e-6));
        const StarBody S = random_star_body(g2, rng);
        for (std::size_t j = 0; j < g2->size(); j += 555) CHECK(S.rho(j) > 0.0);
    }
    Rng a(123), b(123);
    const ConvexBody ka = random_convex_body(g2, a);
    const ConvexBody kb = random_convex_body(g2, b);
    CHECK(ka.rho() == kb.rho());
}
