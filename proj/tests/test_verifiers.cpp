#include "doctest.h"

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/exponent.hpp"
#include "geomineq/grid.hpp"
#include "geomineq/measure.hpp"
#include "geomineq/verify.hpp"

#include <cmath>

using namespace geomineq;

namespace {

const GridPtr g2 = make_grid(2, 4096);

DisintegratedMeasure e1_plane() {
    return homogeneous_measure(w0_constant(*g2), Exponent::finite(-1.0 / 3.0), g2);
}

DisintegratedMeasure lebesgue_plane() {
    return homogeneous_measure(w0_constant(*g2), Exponent::pos_inf(), g2);
}

} // namespace

TEST_CASE("negative-order isoperimetry is sharp at complements of dilates") {
    const auto mu = e1_plane();
    const ConvexBody K = ConvexBody::ball(g2, 1.0);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const CoStar C{StarBody::ball(g2, t)};
        const IneqReport r = check_isoperimetry(mu, K, C, *mu.q_hom, {1e-9, 1e-3, {}});
        CHECK(r.pass);
        CHECK(r.lhs == doctest::Approx(2.0 * kPi / (t * t)).epsilon(1e-9));
        CHECK(std::abs(r.slack) <= 1e-9 * r.lhs);
    }
    // Non-homothetic holes satisfy the bound strictly.
    const CoStar sq{StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0})};
    const IneqReport r = check_isoperimetry(mu, K, sq, *mu.q_hom);
    CHECK(r.pass);
    CHECK(r.oriented_slack > 1e-3 * r.lhs);
}

TEST_CASE("positive-order isoperimetry: discs and quarter-discs are extremal") {
    const auto leb = lebesgue_plane();
    const ConvexBody K = ConvexBody::ball(g2, 1.0);
    const IneqReport r =
        check_isoperimetry(leb, K, StarBody::ball(g2, 2.0), 0.5, {1e-9, 1e-3, {}});
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(4.0 * kPi).epsilon(1e-9));
    CHECK(std::abs(r.slack) <= 1e-9 * r.lhs);

    const double inv = 1.0 / std::sqrt(2.0);
    const auto cone = homogeneous_measure(w0_cone(*g2, kPi / 4.0, {inv, inv, 0.0}),
                                          Exponent::pos_inf(), g2);
    const IneqReport rq =
        check_isoperimetry(cone, K, StarBody::ball(g2, 2.0), 0.5, {1e-9, 1e-3, {}});
    CHECK(rq.pass);
    CHECK(std::abs(rq.slack) <= 1e-9 * std::max(rq.lhs, rq.rhs));
}

TEST_CASE("complemented combination bound: homothets are equality cases") {
    const auto mu = e1_plane();
    const double q = *mu.q_hom;
    const struct {
        double ra, rb, lambda;
    } cases[] = {{1.0, 2.0, 0.5}, {1.0, 1.0, 0.3}, {2.0, 4.0, 0.25}, {0.5, 2.0, 0.7}};
    for (const auto& c : cases) {
        const IneqReport r = check_cbm(mu, StarBody::ball(g2, c.ra),
                                       StarBody::ball(g2, c.rb), c.lambda, q, {1e-9, 1e-3, {}});
        CHECK(r.pass);
        CHECK(r.path == "closed_form");
        CHECK(std::abs(r.slack) <= 1e-9 * std::max(r.lhs, r.rhs));
    }
}

TEST_CASE("complemented combination bound: convex and voxel routes") {
    const auto mu = e1_plane();
    const double q = *mu.q_hom;
    // Convex non-homothet pair goes through support quadrature.
    const IneqReport rc = check_cbm(mu, StarBody::ball(g2, 1.0),
                                    StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}),
                                    0.5, q);
    CHECK(rc.pass);
    CHECK(rc.path == "quadrature");

    // Non-convex star pair routes through the voxel oracle.
    const StarBody flower = StarBody::fourier(g2, {1.0, {0.0, 0.0, 0.25}, {}});
    const StarBody wavy = StarBody::fourier(g2, {1.1, {}, {0.0, 0.0, 0.2}});
    const IneqReport rv = check_cbm(mu, flower, wavy, 0.45, q);
    CHECK(rv.pass);
    CHECK(rv.path == "voxel");
}

TEST_CASE("complemented bound survives raising the order") {
    const auto mu = e1_plane();
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const ConvexBody A = random_convex_body(g2, rng);
        const ConvexBody B = random_convex_body(g2, rng);
        const double l = rng.uniform(0.1, 0.9);
        const IneqReport base = check_cbm(mu, A.as_star(), B.as_star(), l, -1.0);
        const IneqReport weaker = check_cbm(mu, A.as_star(), B.as_star(), l, -0.5);
        CHECK(base.pass);
        CHECK(weaker.pass);
        // The q-mean grows with the order, so the weaker bound has more room.
        CHECK(weaker.rhs >= base.rhs - 1e-12 * weaker.rhs);
    }
}

TEST_CASE("classical combination bound under the plane Lebesgue measure") {
    const auto leb = lebesgue_plane();
    const IneqReport eq = check_bm(leb, ConvexBody::ball(g2, 1.0), ConvexBody::ball(g2, 2.0),
                                   0.5, 0.5, {1e-9, 1e-3, {}});
    CHECK(eq.pass);
    CHECK(std::abs(eq.slack) <= 1e-9 * std::max(eq.lhs, eq.rhs));

    const IneqReport strict =
        check_bm(leb, ConvexBody::ball(g2, 1.0),
                 ConvexBody::box(g2, {-1.0, -0.5, 0.0}, {1.0, 0.5, 0.0}), 0.4, 0.5);
    CHECK(strict.pass);
    CHECK(strict.oriented_slack > 1e-3);
}

TEST_CASE("one-sided growth bound for dilations by the reference body") {
    const auto mu = e1_plane();
    for (double t : {0.0, 0.5, 1.0}) {
        const IneqReport r = check_ocbm_nd(mu, StarBody::ball(g2, 1.0),
                                           StarBody::ball(g2, 1.0), t, {1e-9, 1e-3, {}});
        CHECK(r.pass);
        // Dilating a dilate of the reference body is an equality case.
        CHECK(std::abs(r.slack) <= 1e-9 * std::max({r.lhs, r.rhs, 1e-12}));
    }
    // Non-homothetic A: the bound still holds, one-sided.
    const IneqReport r = check_ocbm_nd(mu, StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}),
                                       StarBody::ball(g2, 1.0), 0.7);
    CHECK(r.pass);
    // B must be a scaled copy of the measure's body.
    CHECK_THROWS_AS((void)check_ocbm_nd(mu, StarBody::ball(g2, 1.0),
                                        StarBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}),
                                        1.0),
                    std::invalid_argument);
}

TEST_CASE("warped isoperimetry is sharp at complements of dilates") {
    const auto mu =
        warped_measure(w0_constant(*g2), StarBody::ball(g2, 1.0), power_exp_law());
    const StarBody B = StarBody::ball(g2, 1.0);
    const IneqReport r1 =
        check_iso_warped(mu, B, CoStar{StarBody::ball(g2, 1.0)}, {1e-9, 1e-3, {}});
    CHECK(r1.pass);
    CHECK(r1.lhs == doctest::Approx(2.0 * kPi * std::exp(1.0)).epsilon(1e-9));
    CHECK(std::abs(r1.slack) <= 1e-9 * r1.lhs);

    const IneqReport r2 =
        check_iso_warped(mu, B, CoStar{StarBody::ball(g2, 2.0)}, {1e-9, 1e-3, {}});
    CHECK(r2.pass);
    CHECK(r2.lhs == doctest::Approx(2.0 * kPi * 0.25 * std::exp(0.5)).epsilon(1e-9));
    CHECK(std::abs(r2.slack) <= 1e-9 * std::max(r2.lhs, r2.rhs));

    // A non-homothetic hole is strictly above the bound.
    const IneqReport r3 =
        check_iso_warped(mu, B, CoStar{StarBody::fourier(g2, {1.3, {0.0, 0.15}, {}})});
    CHECK(r3.pass);
    CHECK(r3.oriented_slack > 1e-4 * r3.lhs);
}

TEST_CASE("segment concavity of the mass power") {
    const auto leb = lebesgue_plane();
    // Homothets: Psi is affine, both defects vanish.
    const BonnesenReport hom = bonnesen_concavity(leb, ConvexBody::ball(g2, 1.0),
                                                  ConvexBody::ball(g2, 3.0), 0.5);
    CHECK(hom.concave.pass);
    CHECK(hom.affinity_defect <= 1e-9);

    // Generic pairs: concave but not affine.
    const BonnesenReport gen =
        bonnesen_concavity(leb, ConvexBody::ball(g2, 1.0),
                           ConvexBody::box(g2, {-1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}), 0.5);
    CHECK(gen.concave.pass);
    CHECK(gen.affinity_defect > 1e-4);
    CHECK(gen.t.size() == 17);

    Rng rng(15);
    for (int i = 0; i < 25; ++i) {
        const ConvexBody A = random_convex_body(g2, rng);
        const ConvexBody B = random_convex_body(g2, rng);
        const BonnesenReport br = bonnesen_concavity(leb, A, B, 0.5);
        CHECK(br.concave.pass);
        CHECK(br.concavity_defect >= -1e-9);
    }
}

TEST_CASE("equality diagnostics measure distance from homothety") {
    const auto mu = e1_plane();
    const StarBody disc1 = StarBody::ball(g2, 1.0);
    const StarBody disc3 = StarBody::ball(g2, 3.0);
    const auto eq = equality_diagnostics(disc3, disc1, mu.eta);
    CHECK(eq.ratio == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eq.homothety_residual <= 1e-9);
    CHECK(eq.convexity_deficit <= 1e-9);

    // Fourier noise of amplitude 0.05 or more must be flagged.
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        FourierDesc f;
        f.a0 = 1.0;
        f.cos_coef = {0.0, 0.0, rng.uniform(0.05, 0.12)};
        f.sin_coef = {0.0, rng.uniform(0.05, 0.1)};
        const StarBody noisy = StarBody::fourier(g2, f);
        const auto d = equality_diagnostics(noisy, disc1, mu.eta);
        CHECK(d.homothety_residual > 1e-3);
        // And the isoperimetric slack is strictly positive on such holes.
        const IneqReport r =
            check_isoperimetry(mu, ConvexBody::ball(g2, 1.0), CoStar{noisy}, *mu.q_hom);
        CHECK(r.pass);
        CHECK(r.oriented_slack > 1e-3 * r.lhs);
    }
}

TEST_CASE("support-space diagnostics recover translations") {
    const ConvexBody disc = ConvexBody::ball(g2, 1.0);
    const auto hA = translate_support(disc, {0.4, -0.2, 0.0});
    const auto d = equality_diagnostics_supports(*g2, hA, disc.support(), true);
    REQUIRE(d.shift.has_value());
    CHECK((*d.shift)[0] == doctest::Approx(0.4).epsilon(1e-9));
    CHECK((*d.shift)[1] == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(d.homothety_residual <= 1e-9);
    CHECK(d.ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mixtures and rotations preserve the verified structure") {
    const auto mu = e1_plane();
    std::vector<DisintegratedMeasure> rots;
    for (int k = 0; k < 4; ++k) rots.push_back(rotate_measure_quarter(mu, k));
    const auto mix = mixture_measure(rots, {0.25, 0.25, 0.25, 0.25});
    // Four equal rotations of a rotation-invariant measure reproduce it.
    CHECK(measure_of_costar(mix, CoStar{StarBody::ball(g2, 1.0)}) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(mix.q_hom.has_value());

    const IneqReport r = check_cbm(mix, StarBody::ball(g2, 1.0), StarBody::ball(g2, 2.0),
                                   0.5, *mix.q_hom, {1e-9, 1e-3, {}});
    CHECK(r.pass);
    CHECK(std::abs(r.slack) <= 1e-9 * std::max(r.lhs, r.rhs));
}

TEST_CASE("closure battery: mixture, pushforward and weaker order all verify") {
    const auto mu = e1_plane();
    std::vector<DisintegratedMeasure> rots{rotate_measure_quarter(mu, 0),
                                           rotate_measure_quarter(mu, 1)};
    const auto reports =
        closure_suite(rots, {0.6, 0.4}, {1.1, 0.2, -0.1, 0.9}, -1.0, -0.5, {});
    CHECK(reports.size() >= 9);
    int mixture = 0, pushforward = 0, monotone = 0;
    for (const auto& r : reports) {
        CHECK(r.pass);
        if (r.name.rfind("closure_mixture/", 0) == 0) ++mixture;
        if (r.name.rfind("closure_pushforward/", 0) == 0) ++pushforward;
        if (r.name.rfind("closure_monotone/", 0) == 0) ++monotone;
    }
    CHECK(mixture > 0);
    CHECK(mixture == pushforward);
    CHECK(mixture == monotone);
}

TEST_CASE("minimizer search lands on the sharp bound for discs") {
    const auto mu = e1_plane();
    const ConvexBody K = ConvexBody::ball(g2, 1.0);
    // Degree 0 searches only over dilates: the bound is attained exactly.
    const ProfileSearchResult r0 = profile_search(mu, K, kPi, 0, 200);
    CHECK(r0.bound == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(std::abs(r0.gap) <= 1e-9 * r0.bound);

    const ProfileSearchResult r3 = profile_search(mu, K, kPi, 3, 4000);
    CHECK(r3.mass == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(r3.gap >= -1e-9 * r3.bound);
    CHECK(r3.gap <= 1e-3 * r3.bound);
    CHECK(r3.fourier_tail < 1e-2);
}
