#include "doctest.h"

#include "geomineq/common.hpp"
#include "geomineq/interval.hpp"
#include "geomineq/radial_law.hpp"

#include <cmath>
#include <vector>

using namespace geomineq;
using Iv = IntervalUnion::Interval;

TEST_CASE("interval unions canonicalize on construction") {
    const auto u = IntervalUnion::from_intervals({{2.0, 3.0}, {0.0, 1.0}, {1.0, 2.0}});
    REQUIRE(u.component_count() == 1);
    CHECK(u.parts()[0].lo == 0.0);
    CHECK(u.parts()[0].hi == 3.0);

    const auto v = IntervalUnion::from_intervals({{0.0, 1.0}, {2.0, kInf}});
    REQUIRE(v.component_count() == 2);
    CHECK(v.length() == kInf);

    const auto w = IntervalUnion::from_intervals({{0.5, 0.5}});
    CHECK(w.empty());
}

TEST_CASE("dilation and complement are exact") {
    const auto u = IntervalUnion::from_intervals({{0.0, 1.0}, {2.0, 3.0}});
    const auto d = u.dilate_right(1.0);
    REQUIRE(d.component_count() == 1);
    CHECK(d.parts()[0].lo == 0.0);
    CHECK(d.parts()[0].hi == 4.0);

    const auto c = u.complement_in_halfline();
    REQUIRE(c.component_count() == 2);
    CHECK(c.parts()[0].lo == 1.0);
    CHECK(c.parts()[0].hi == 2.0);
    CHECK(c.parts()[1].lo == 3.0);
    CHECK(c.parts()[1].hi == kInf);
    // Complement is an involution.
    const auto cc = c.complement_in_halfline();
    REQUIRE(cc.component_count() == 2);
    CHECK(cc.parts()[1].hi == 3.0);
}

TEST_CASE("shipped laws evaluate their integrals in closed form") {
    const LawPtr p2 = power_law(2.0);
    CHECK(p2->phi(2.0) == doctest::Approx(0.25));
    CHECK(p2->Phi(2.0) == doctest::Approx(0.5));
    CHECK(p2->Phi_inv(0.5) == doctest::Approx(2.0));
    CHECK(p2->origin_integral(1.0) == kInf);
    CHECK(p2->traits().origin_nonintegrable);
    CHECK(p2->traits().log_convex);

    const LawPtr pe = power_exp_law();
    CHECK(pe->Phi(1.0) == doctest::Approx(std::expm1(1.0)));
    CHECK(pe->Phi_inv(std::expm1(0.5)) == doctest::Approx(2.0));
    CHECK(pe->phi(1.0) == doctest::Approx(std::exp(1.0)));
    CHECK(pe->traits().strictly_log_convex);

    // Integrable-origin power law exposes the origin side instead.
    const LawPtr p_half = power_law(0.5);
    CHECK(p_half->origin_integral(1.0) == doctest::Approx(2.0));
    CHECK(p_half->Phi(1.0) == kInf);
}

TEST_CASE("table law interpolates log-linearly and integrates consistently") {
    const LawPtr tab = table_law({0.5, 1.0, 2.0, 4.0}, {4.0, 1.0, 0.25, 0.0625});
    CHECK(tab->phi(1.0) == doctest::Approx(1.0));
    CHECK(tab->phi(2.0) == doctest::Approx(0.25));
    // Geometric midpoint of (1, 2) under log-linear interpolation.
    CHECK(tab->phi(std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-9));
    // Phi_inv inverts Phi across the sampled range.
    for (double t : {0.6, 1.0, 1.7, 3.0}) {
        const double x = tab->Phi(t);
        CHECK(tab->Phi_inv(x) == doctest::Approx(t).epsilon(1e-9));
    }
}

TEST_CASE("one-sided combination bound: exact rational anchors") {
    const LawPtr p2 = power_law(2.0);

    // Single starting interval, equality: both sides are 1/5.
    const auto A1 = IntervalUnion::from_intervals({{0.0, 2.0}});
    const IneqReport r1 = ocbm_1d(*p2, A1, 1.0, 3.0);
    CHECK(r1.pass);
    CHECK(r1.lhs == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r1.rhs == doctest::Approx(0.2).epsilon(1e-12));

    // Two components: 1/4 on the left, 5/11 on the right, strict slack.
    const auto A2 = IntervalUnion::from_intervals({{0.0, 1.0}, {2.0, 3.0}});
    const IneqReport r2 = ocbm_1d(*p2, A2, 1.0, 1.0);
    CHECK(r2.pass);
    CHECK(r2.lhs == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r2.rhs == doctest::Approx(5.0 / 11.0).epsilon(1e-12));
    CHECK(r2.lhs < r2.rhs);
}

TEST_CASE("one-sided combination bound: random unions never violate") {
    const LawPtr laws[] = {power_law(2.0), power_law(1.5), power_exp_law(),
                           table_law({0.5, 1.0, 2.0, 4.0}, {4.0, 1.0, 0.25, 0.0625})};
    Rng rng(2026);
    int worst_failures = 0;
    double min_oriented = kInf;
    for (int trial = 0; trial < 10000; ++trial) {
        const LawPtr& law = laws[rng.below(4)];
        // Random union anchored at zero: k extra components after [0, a0).
        std::vector<Iv> parts;
        double cursor = 0.0;
        const int k = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < k; ++i) {
            const double len = rng.uniform(0.1, 2.0);
            parts.push_back({cursor, cursor + len});
            cursor += len + ((i + 1 < k) ? rng.uniform(0.1, 2.0) : 0.0);
        }
        const auto A = IntervalUnion::from_intervals(parts);
        const double b = rng.log_uniform(0.2, 5.0);
        const double t = rng.uniform(0.0, 4.0);
        const IneqReport r = ocbm_1d(*law, A, b, t, 1e-10);
        if (!r.pass) ++worst_failures;
        if (std::isfinite(r.oriented_slack)) min_oriented = std::min(min_oriented, r.oriented_slack);
    }
    CHECK(worst_failures == 0);
    CHECK(min_oriented >= -1e-10);
}

TEST_CASE("dilating a single anchored interval achieves equality") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const LawPtr law = (trial % 2 == 0) ? power_law(2.0) : power_exp_law();
        const auto A = IntervalUnion::from_intervals({{0.0, rng.uniform(0.3, 4.0)}});
        const double b = rng.log_uniform(0.3, 3.0);
        const double t = rng.uniform(0.0, 3.0);
        const IneqReport r = ocbm_1d(*law, A, b, t, 1e-10);
        CHECK(r.pass);
        CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-10));
    }
}

TEST_CASE("1-D boundary measure counts interior left endpoints") {
    const LawPtr p2 = power_law(2.0);
    // C = [1,2) u [3,inf): left endpoints 1 and 3, boundary = b (phi(1) + phi(3)).
    const auto C = IntervalUnion::from_intervals({{1.0, 2.0}, {3.0, kInf}});
    CHECK(boundary_1d(*p2, C, 2.0) == doctest::Approx(2.0 * (1.0 + 1.0 / 9.0)));
    // A left endpoint at zero contributes nothing for an origin-divergent law.
    const auto D = IntervalUnion::from_intervals({{0.0, 1.0}});
    CHECK(boundary_1d(*p2, D, 1.0) == 0.0);
}

TEST_CASE("half-line diagnosis flags exactly the equality shapes") {
    const LawPtr p2 = power_law(2.0);
    const auto half = IntervalUnion::halfline(2.0);
    const auto diag = equality_shape_1d(*p2, half, 1.0);
    CHECK(diag.is_halfline);
    CHECK(diag.equality_holds);
    CHECK(diag.offending_mass == doctest::Approx(0.0).epsilon(1e-12));

    const auto split = IntervalUnion::from_intervals({{1.0, 1.5}, {3.0, kInf}});
    const auto diag2 = equality_shape_1d(*p2, split, 1.0);
    CHECK_FALSE(diag2.is_halfline);
    CHECK(diag2.offending_mass > 1e-3);
    CHECK_FALSE(diag2.equality_holds);
    CHECK(diag2.boundary > diag2.profile_bound);
}

TEST_CASE("law shape probes confirm declared traits") {
    const auto lc = check_logconvex(*power_law(2.0));
    CHECK(lc.pass);
    const auto lc2 = check_logconvex(*power_exp_law());
    CHECK(lc2.pass);
    CHECK(lc2.strict);

    // A non-log-convex table density is detected.
    const LawPtr bump = table_law({0.5, 1.0, 2.0, 4.0}, {1.0, 1.0, 0.9, 0.01});
    const auto lc3 = check_logconvex(*bump, 400, 0.6, 3.5);
    CHECK_FALSE(lc3.pass);
}

TEST_CASE("mass profile concavity holds for log-convex laws") {
    for (const LawPtr& law : {power_law(2.0), power_exp_law()}) {
        const auto fc = check_F_concavity(*law, 0.7);
        CHECK(fc.pass);
        CHECK(fc.iprime_ok);
    }
}
