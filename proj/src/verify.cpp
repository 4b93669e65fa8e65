#include "geomineq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "geomineq/exponent.hpp"
#include "geomineq/radial_law.hpp"
#include "geomineq/voxel.hpp"

namespace geomineq {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_finite_mass(ExtNonneg v, const char* msg) {
    if (!(v >= 0.0) || v == kInf) throw std::invalid_argument(msg);
}

/// Homothety ratio t with rho_S = t * rho_K on every node, or nullopt.
std::optional<double> homothety_ratio(const std::vector<double>& rho_S,
                                      const std::vector<double>& rho_K) {
    double t = -1.0;
    for (std::size_t i = 0; i < rho_S.size(); ++i) {
        if (rho_K[i] > 1e-300) {
            const double r = rho_S[i] / rho_K[i];
            if (t < 0.0)
                t = r;
            else if (!(std::abs(r - t) <= 1e-12 * std::max(1.0, t)))
                return std::nullopt;
        } else if (rho_S[i] > 1e-12) {
            return std::nullopt;
        }
    }
    if (t < 0.0) return std::nullopt;
    return t;
}

std::string describe_desc(const Descriptor& d, int n, std::size_t grid_size) {
    std::ostringstream os;
    if (const auto* b = std::get_if<BallDesc>(&d)) {
        os << "ball r=" << fmt_double(b->r);
    } else if (const auto* b = std::get_if<BoxDesc>(&d)) {
        os << "box";
        for (int k = 0; k < n; ++k)
            os << " [" << fmt_double(b->lo[k]) << "," << fmt_double(b->hi[k]) << "]";
    } else if (const auto* p = std::get_if<PolygonDesc>(&d)) {
        os << "polygon k=" << p->verts.size();
    } else if (const auto* f = std::get_if<FourierDesc>(&d)) {
        os << "fourier a0=" << fmt_double(f->a0) << " deg=" << f->cos_coef.size();
    } else {
        os << "star grid N=" << grid_size;
    }
    return os.str();
}

ExtNonneg complement_mass(const DisintegratedMeasure& mu, const StarBody& S) {
    return measure_of_costar(mu, CoStar{S});
}

Exponent exponent_of(double q) { return Exponent::finite(q); }

struct ComboMass {
    ExtNonneg value = 0.0;
    std::string path;
    std::string note;
};

/// Complement mass of wa*A + wb*B. Convex pairs go through exact support
/// sums (radial shortcut for homothets, where the two sums agree); anything
/// else routes through the planar voxel oracle with outer-filled masks, plus
/// the exact mass beyond the voxel window.
ComboMass complement_mass_of_combination(const DisintegratedMeasure& mu, const StarBody& A,
                                         const StarBody& B, double wa, double wb,
                                         const CheckOptions& opt) {
    ComboMass out;
    if (wb == 0.0 || wa == 0.0) {
        out.value = complement_mass(mu, wb == 0.0 ? scale(A, wa) : scale(B, wb));
        out.path = "closed_form";
        return out;
    }
    const bool convex = is_convex_star(A) && is_convex_star(B);
    if (convex) {
        const auto m = homothety_ratio(A.rho(), B.rho());
        StarBody S = m ? radial_sum(A, B, wa, wb)
                       : minkowski_sum(star_to_convex(A), star_to_convex(B), wa, wb).as_star();
        out.value = complement_mass(mu, S);
        const bool exact = m.has_value() || !std::holds_alternative<std::monostate>(S.descriptor());
        out.path = exact ? "closed_form" : "quadrature";
        return out;
    }
    if (mu.n() != 2)
        throw std::invalid_argument(
            "complement combination: non-convex bodies need the planar voxel oracle");
    const VoxelParams& vp = opt.voxel;
    const VoxelSet mA = voxelize(scale(A, wa), vp.lo, vp.hi, vp.h, VoxelFill::outer);
    const VoxelSet mB = voxelize(scale(B, wb), vp.lo, vp.hi, vp.h, VoxelFill::outer);
    const VoxelSet M = voxel_minkowski(mA, mB);
    const DensitySampler w = make_density_sampler(mu);
    const VoxelMass inwin = voxel_measure(w, voxel_not(M));
    const StarBody window =
        StarBody::box(mu.grid, Vec3{vp.lo, vp.lo, 0.0}, Vec3{vp.hi, vp.hi, 0.0});
    out.value = inwin.value + double(complement_mass(mu, window));
    out.path = "voxel";
    out.note = "voxel route (non-convex input, outer-filled masks); ";
    if (inwin.singular_flagged) out.note += "origin cells pooled; ";
    return out;
}

void check_shared_grid(const DisintegratedMeasure& mu, const GridPtr& g, const char* who) {
    if (!same_grid(mu.grid, g))
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

/// 3x3 linear solve by Gaussian elimination with partial pivoting.
bool solve3(double M[3][3], double b[3], double x[3]) {
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int p = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(M[idx[r]][c]) > std::abs(M[idx[p]][c])) p = r;
        std::swap(idx[c], idx[p]);
        if (std::abs(M[idx[c]][c]) < 1e-14) return false;
        for (int r = c + 1; r < 3; ++r) {
            const double f = M[idx[r]][c] / M[idx[c]][c];
            for (int k = c; k < 3; ++k) M[idx[r]][k] -= f * M[idx[c]][k];
            b[idx[r]] -= f * b[idx[c]];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double s = b[idx[c]];
        for (int k = c + 1; k < 3; ++k) s -= M[idx[c]][k] * x[k];
        x[c] = s / M[idx[c]][c];
    }
    return true;
}

struct SupportFit {
    bool ok = false;
    double m = 0.0;
    std::array<double, 2> b{0.0, 0.0};
    double residual = 0.0; // L1 misfit of h_A + <b,theta> - m h_B, scale-relative
};

/// Least-squares fit h_A(theta) + <b, theta> ~ m h_B(theta) over the grid,
/// the continuous limit of a shift grid search; the residual is evaluated in
/// L1 at the optimum. The shift b moves A onto a homothet of B.
SupportFit fit_support_shift(const DirectionGrid& g, const std::vector<double>& hA,
                             const std::vector<double>& hB) {
    SupportFit fit;
    double M[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhsv[3] = {0, 0, 0};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = g.weights[i];
        const double f[3] = {g.dirs[i][0], g.dirs[i][1], -hB[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) M[r][c] += w * f[r] * f[c];
            rhsv[r] -= w * f[r] * hA[i];
        }
    }
    double x[3];
    if (!solve3(M, rhsv, x)) return fit;
    double snum = 0.0, sden = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = hA[i] + x[0] * g.dirs[i][0] + x[1] * g.dirs[i][1] - x[2] * hB[i];
        snum += g.weights[i] * std::abs(r);
        sden += g.weights[i] * std::abs(hA[i]);
    }
    fit.ok = true;
    fit.b = {x[0], x[1]};
    fit.m = x[2];
    fit.residual = snum / std::max(sden, 1e-300);
    return fit;
}

/// Image of a planar star body under the linear map M (row-major 2x2).
StarBody map_body_linear(const StarBody& S, const std::array<double, 4>& M) {
    const double det = M[0] * M[3] - M[1] * M[2];
    if (std::abs(det) < 1e-12)
        throw std::invalid_argument("map_body_linear: singular linear map");
    if (auto poly = descriptor_as_polygon(S.descriptor())) {
        std::vector<std::array<double, 2>> verts(poly->verts.size());
        for (std::size_t i = 0; i < verts.size(); ++i) {
            const auto& v = poly->verts[i];
            verts[i] = {M[0] * v[0] + M[1] * v[1], M[2] * v[0] + M[3] * v[1]};
        }
        if (det < 0.0) std::reverse(verts.begin(), verts.end());
        return StarBody::polygon(S.grid_ptr(), std::move(verts));
    }
    const std::array<double, 4> inv{M[3] / det, -M[1] / det, -M[2] / det, M[0] / det};
    const auto& g = S.grid();
    std::vector<double> rho(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& th = g.dirs[i];
        const double ux = inv[0] * th[0] + inv[1] * th[1];
        const double uy = inv[2] * th[0] + inv[3] * th[1];
        const double nu = std::hypot(ux, uy);
        rho[i] = S.rho_in_direction({ux / nu, uy / nu, 0.0}) / nu;
    }
    return StarBody(S.grid_ptr(), std::move(rho));
}

struct ClosureProbe {
    StarBody A;
    StarBody B;
    double lambda = 0.5;
    std::string tag;
};

std::vector<ClosureProbe> closure_probes(const GridPtr& g) {
    std::vector<ClosureProbe> out;
    const double scales[] = {0.7, 1.0, 1.4};
    const double lambdas[] = {0.25, 0.5, 0.75};
    for (double s : scales) {
        const StarBody disc = StarBody::ball(g, s);
        const StarBody disc2 = StarBody::ball(g, 2.0 * s);
        const StarBody box =
            StarBody::box(g, Vec3{-s, -0.6 * s, 0.0}, Vec3{0.8 * s, s, 0.0});
        std::vector<std::array<double, 2>> pv(5), pv90(5);
        for (int k = 0; k < 5; ++k) {
            const double a = 2.0 * kPi * k / 5.0 + 0.3;
            pv[k] = {s * std::cos(a), 0.8 * s * std::sin(a)};
            pv90[k] = {-pv[k][1], pv[k][0]};
        }
        const StarBody pent = StarBody::polygon(g, pv);
        const StarBody pent90 = StarBody::polygon(g, pv90);
        const std::pair<std::pair<const StarBody*, const StarBody*>, const char*> pairs[] = {
            {{&disc, &disc2}, "homothets"}, {{&disc, &box}, "disc-box"},
            {{&box, &pent}, "box-polygon"}, {{&pent, &disc}, "polygon-disc"},
            {{&pent, &pent90}, "rotated-polygons"},
        };
        for (const auto& pr : pairs)
            for (double l : lambdas) {
                std::ostringstream tag;
                tag << pr.second << "-s" << fmt_double(s) << "-l" << fmt_double(l);
                out.push_back({*pr.first.first, *pr.first.second, l, tag.str()});
            }
    }
    return out;
}

} // namespace

bool is_convex_star(const StarBody& S, double rel_tol) {
    const auto& d = S.descriptor();
    if (std::holds_alternative<BallDesc>(d) || std::holds_alternative<BoxDesc>(d) ||
        std::holds_alternative<PolygonDesc>(d))
        return true;
    const int n = S.grid().n;
    if (n == 1) return true; // an interval around the origin
    if (n != 2) return false;
    double rmax = 0.0;
    for (double r : S.rho()) rmax = std::max(rmax, r);
    if (rmax == 0.0) return true;
    return convexity_deficit_area(S) <= rel_tol * std::max(1.0, rmax * rmax);
}

ConvexBody star_to_convex(const StarBody& S) {
    const auto& d = S.descriptor();
    const GridPtr& g = S.grid_ptr();
    if (const auto* b = std::get_if<BallDesc>(&d)) return ConvexBody::ball(g, b->r);
    if (const auto* b = std::get_if<BoxDesc>(&d)) return ConvexBody::box(g, b->lo, b->hi);
    if (const auto* p = std::get_if<PolygonDesc>(&d)) return ConvexBody::polygon(g, p->verts);
    const int n = S.grid().n;
    if (n == 1) {
        const double hi = S.rho_in_direction({1.0, 0.0, 0.0});
        const double lo = S.rho_in_direction({-1.0, 0.0, 0.0});
        return ConvexBody::box(g, Vec3{-lo, 0.0, 0.0}, Vec3{hi, 0.0, 0.0});
    }
    if (n != 2 || !is_convex_star(S))
        throw std::invalid_argument("star_to_convex: body is not convex within tolerance");
    return ConvexBody::from_support(g, star_hull_support(S), d);
}

std::string describe_body(const StarBody& S) {
    return describe_desc(S.descriptor(), S.grid().n, S.grid().size());
}

std::string describe_body(const ConvexBody& K) {
    return describe_desc(K.descriptor(), K.grid().n, K.grid().size());
}

IneqReport check_bm(const DisintegratedMeasure& mu, const ConvexBody& A, const ConvexBody& B,
                    double lambda, double q, const CheckOptions& opt) {
    check_shared_grid(mu, A.grid_ptr(), "check_bm");
    check_shared_grid(mu, B.grid_ptr(), "check_bm");
    require(lambda > 0.0 && lambda < 1.0, "check_bm: lambda must lie in (0,1)");
    require(std::isfinite(q) && q != 0.0 && q <= 1.0 / mu.n() + 1e-12,
            "check_bm: q must be nonzero and <= 1/n");

    const ExtNonneg mA = measure_of_star(mu, A.as_star());
    const ExtNonneg mB = measure_of_star(mu, B.as_star());
    require_finite_mass(mA, "check_bm: mu(A) must be finite");
    require_finite_mass(mB, "check_bm: mu(B) must be finite");
    require(mA > 0.0 && mB > 0.0, "check_bm: masses must be nonzero");

    const auto m = homothety_ratio(A.rho(), B.rho());
    const StarBody S = m ? radial_sum(A.as_star(), B.as_star(), lambda, 1.0 - lambda)
                         : minkowski_sum(A, B, lambda, 1.0 - lambda).as_star();
    const ExtNonneg lhs = measure_of_star(mu, S);
    const ExtNonneg rhs = power_mean(mA, mB, lambda, exponent_of(q));

    const bool exact = m.has_value() || !std::holds_alternative<std::monostate>(S.descriptor());
    std::ostringstream wit;
    wit << "A=" << describe_body(A) << " | B=" << describe_body(B)
        << " | lambda=" << fmt_double(lambda) << " q=" << fmt_double(q)
        << " | law=" << mu.law->describe();
    return make_report("bm", double(lhs), double(rhs), Orientation::GE, opt.tol_analytic,
                       CheckMode::assert_mode, exact ? "closed_form" : "quadrature", wit.str());
}

IneqReport check_cbm(const DisintegratedMeasure& mu, const StarBody& A, const StarBody& B,
                     double lambda, double q, const CheckOptions& opt) {
    check_shared_grid(mu, A.grid_ptr(), "check_cbm");
    check_shared_grid(mu, B.grid_ptr(), "check_cbm");
    require(lambda > 0.0 && lambda < 1.0, "check_cbm: lambda must lie in (0,1)");
    require(std::isfinite(q) && q != 0.0 && q <= 1.0 / mu.n() + 1e-12,
            "check_cbm: q must be nonzero and <= 1/n");

    const ExtNonneg cA = complement_mass(mu, A);
    const ExtNonneg cB = complement_mass(mu, B);
    require_finite_mass(cA, "check_cbm: mu(complement of A) must be finite");
    require_finite_mass(cB, "check_cbm: mu(complement of B) must be finite");

    const ComboMass lhs = complement_mass_of_combination(mu, A, B, lambda, 1.0 - lambda, opt);
    const ExtNonneg rhs = power_mean(cA, cB, lambda, exponent_of(q));
    const double tol = lhs.path == "voxel" ? opt.tol_voxel : opt.tol_analytic;

    std::ostringstream wit;
    wit << "A=" << describe_body(A) << " | B=" << describe_body(B)
        << " | lambda=" << fmt_double(lambda) << " q=" << fmt_double(q)
        << " | law=" << mu.law->describe();
    return make_report("cbm", double(lhs.value), double(rhs), Orientation::LE, tol,
                       CheckMode::assert_mode, lhs.path, wit.str(), lhs.note);
}

IneqReport check_isoperimetry(const DisintegratedMeasure& mu, const ConvexBody& K,
                              const StarBody& A, double q, const CheckOptions& opt) {
    check_shared_grid(mu, K.grid_ptr(), "check_isoperimetry");
    check_shared_grid(mu, A.grid_ptr(), "check_isoperimetry");
    require(q > 0.0, "check_isoperimetry: star-body branch needs q > 0");
    require(mu.q_hom.has_value() && std::abs(*mu.q_hom - q) <= 1e-12,
            "check_isoperimetry: q must match the measure homogeneity");

    const ExtNonneg mK = measure_of_star(mu, K.as_star());
    const ExtNonneg mA = measure_of_star(mu, A);
    require_finite_mass(mK, "check_isoperimetry: mu(K) must be finite");
    require_finite_mass(mA, "check_isoperimetry: mu(A) must be finite");
    require(mK > 0.0, "check_isoperimetry: mu(K) must be positive");

    const ExtNonneg lhs = boundary_measure(mu, A, K, BoundarySide::outer);
    const double rhs = (1.0 / q) * std::pow(double(mK), q) * std::pow(double(mA), 1.0 - q);
    const bool exact = homothety_ratio(A.rho(), K.rho()).has_value();

    std::ostringstream wit;
    wit << "K=" << describe_body(K) << " | A=" << describe_body(A) << " | q=" << fmt_double(q)
        << " | law=" << mu.law->describe();
    return make_report("isoperimetry", double(lhs), rhs, Orientation::GE, opt.tol_analytic,
                       CheckMode::assert_mode, exact ? "closed_form" : "quadrature", wit.str());
}

IneqReport check_isoperimetry(const DisintegratedMeasure& mu, const ConvexBody& K,
                              const CoStar& C, double q, const CheckOptions& opt) {
    check_shared_grid(mu, K.grid_ptr(), "check_isoperimetry");
    check_shared_grid(mu, C.inner.grid_ptr(), "check_isoperimetry");
    require(q < 0.0, "check_isoperimetry: co-star branch needs q < 0");
    require(mu.q_hom.has_value() && std::abs(*mu.q_hom - q) <= 1e-12,
            "check_isoperimetry: q must match the measure homogeneity");

    const ExtNonneg cK = complement_mass(mu, K.as_star());
    const ExtNonneg cC = measure_of_costar(mu, C);
    require_finite_mass(cK, "check_isoperimetry: mu(complement of K) must be finite");
    require_finite_mass(cC, "check_isoperimetry: mu(C) must be finite");
    require(cK > 0.0, "check_isoperimetry: mu(complement of K) must be positive");

    const ExtNonneg lhs = boundary_measure(mu, C, K, BoundarySide::inner);
    const double rhs = -(1.0 / q) * std::pow(double(cK), q) * std::pow(double(cC), 1.0 - q);
    const bool exact = homothety_ratio(C.inner.rho(), K.rho()).has_value();

    std::ostringstream wit;
    wit << "K=" << describe_body(K) << " | C=complement of " << describe_body(C.inner)
        << " | q=" << fmt_double(q) << " | law=" << mu.law->describe();
    return make_report("isoperimetry", double(lhs), rhs, Orientation::GE, opt.tol_analytic,
                       CheckMode::assert_mode, exact ? "closed_form" : "quadrature", wit.str());
}

IneqReport check_ocbm_nd(const DisintegratedMeasure& mu, const StarBody& A, const StarBody& B,
                         double t, const CheckOptions& opt) {
    check_shared_grid(mu, A.grid_ptr(), "check_ocbm_nd");
    check_shared_grid(mu, B.grid_ptr(), "check_ocbm_nd");
    require(std::isfinite(t) && t >= 0.0, "check_ocbm_nd: t must be nonnegative");
    require(homothety_ratio(B.rho(), mu.rho_B).has_value(),
            "check_ocbm_nd: B must be a scaled copy of the measure's body");

    const ExtNonneg cA = complement_mass(mu, A);
    const ExtNonneg cB = complement_mass(mu, B);
    require_finite_mass(cA, "check_ocbm_nd: mu(complement of A) must be finite");
    require_finite_mass(cB, "check_ocbm_nd: mu(complement of B) must be finite");

    const ComboMass lhs = complement_mass_of_combination(mu, A, B, 1.0, t, opt);
    const RadialLaw& Lh = *mu.law_hat;
    const ExtNonneg xA = Lh.Phi_inv(cA);
    const ExtNonneg xB = Lh.Phi_inv(cB);
    const ExtNonneg rhs = Lh.Phi(double(xA) + t * double(xB));
    const double tol = lhs.path == "voxel" ? opt.tol_voxel : opt.tol_analytic;

    std::string notes = lhs.note;
    if (!mu.law->traits().log_convex)
        notes += "warning: law is not log-convex, the concavity hypothesis is unverified; ";

    std::ostringstream wit;
    wit << "A=" << describe_body(A) << " | B=" << describe_body(B) << " | t=" << fmt_double(t)
        << " | law=" << mu.law->describe();
    return make_report("ocbm_nd", double(lhs.value), double(rhs), Orientation::LE, tol,
                       CheckMode::assert_mode, lhs.path, wit.str(), notes);
}

IneqReport check_iso_warped(const DisintegratedMeasure& mu, const StarBody& B, const CoStar& C,
                            const CheckOptions& opt) {
    check_shared_grid(mu, B.grid_ptr(), "check_iso_warped");
    check_shared_grid(mu, C.inner.grid_ptr(), "check_iso_warped");
    const auto s = homothety_ratio(B.rho(), mu.rho_B);
    require(s.has_value() && std::abs(*s - 1.0) <= 1e-12,
            "check_iso_warped: B must be the measure's own body");

    const ExtNonneg cC = measure_of_costar(mu, C);
    require_finite_mass(cC, "check_iso_warped: mu(C) must be finite");

    const ConvexBody K = star_to_convex(B);
    const ExtNonneg lhs = boundary_measure(mu, C, K, BoundarySide::inner);
    const ExtNonneg rhs = iso_profile(*mu.law_hat, cC);
    const bool exact = homothety_ratio(C.inner.rho(), B.rho()).has_value();

    std::ostringstream wit;
    wit << "B=" << describe_body(B) << " | C=complement of " << describe_body(C.inner)
        << " | law=" << mu.law->describe();
    return make_report("iso_warped", double(lhs), double(rhs), Orientation::GE, opt.tol_analytic,
                       CheckMode::assert_mode, exact ? "closed_form" : "quadrature", wit.str());
}

BonnesenReport bonnesen_concavity(const DisintegratedMeasure& mu, const ConvexBody& A,
                                  const ConvexBody& B, double q, int steps,
                                  double rel_tolerance) {
    check_shared_grid(mu, A.grid_ptr(), "bonnesen_concavity");
    check_shared_grid(mu, B.grid_ptr(), "bonnesen_concavity");
    require(steps >= 2, "bonnesen_concavity: need at least two steps");
    require(q > 0.0 && q <= 1.0 / mu.n() + 1e-12, "bonnesen_concavity: q must lie in (0, 1/n]");

    BonnesenReport rep;
    rep.t.resize(std::size_t(steps) + 1);
    rep.psi.resize(std::size_t(steps) + 1);
    const auto m = homothety_ratio(A.rho(), B.rho());
    for (int k = 0; k <= steps; ++k) {
        const double t = double(k) / steps;
        rep.t[std::size_t(k)] = t;
        const StarBody S = m ? radial_sum(A.as_star(), B.as_star(), 1.0 - t, t)
                             : minkowski_sum(A, B, 1.0 - t, t).as_star();
        const ExtNonneg mass = measure_of_star(mu, S);
        require_finite_mass(mass, "bonnesen_concavity: infinite mass along the segment");
        require(mass > 0.0, "bonnesen_concavity: zero mass along the segment");
        rep.psi[std::size_t(k)] = std::pow(double(mass), q);
    }

    double scale = 0.0;
    for (double v : rep.psi) scale = std::max(scale, std::abs(v));
    int worst = 1;
    double worst_defect = kInf;
    for (int k = 1; k < steps; ++k) {
        const double defect =
            rep.psi[std::size_t(k)] -
            0.5 * (rep.psi[std::size_t(k) - 1] + rep.psi[std::size_t(k) + 1]);
        if (defect < worst_defect) {
            worst_defect = defect;
            worst = k;
        }
    }
    rep.concavity_defect = worst_defect;
    double aff = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double chord = rep.psi.front() +
                             rep.t[std::size_t(k)] * (rep.psi.back() - rep.psi.front());
        aff = std::max(aff, std::abs(rep.psi[std::size_t(k)] - chord));
    }
    rep.affinity_defect = aff / std::max(scale, 1e-12);

    std::ostringstream wit;
    wit << "A=" << describe_body(A) << " | B=" << describe_body(B) << " | q=" << fmt_double(q)
        << " steps=" << steps << " | law=" << mu.law->describe();
    rep.concave = make_report(
        "bonnesen_concavity", rep.psi[std::size_t(worst)],
        0.5 * (rep.psi[std::size_t(worst) - 1] + rep.psi[std::size_t(worst) + 1]),
        Orientation::GE, rel_tolerance, CheckMode::assert_mode,
        m ? "closed_form" : "quadrature", wit.str());
    return rep;
}

EqualityDiagnosis equality_diagnostics(const StarBody& A, const StarBody& B,
                                       const std::vector<double>& eta_support,
                                       bool translation_search) {
    require(same_grid(A.grid_ptr(), B.grid_ptr()), "equality_diagnostics: grid mismatch");
    require(eta_support.size() == A.grid().size(),
            "equality_diagnostics: eta does not match the grid");

    EqualityDiagnosis diag;
    const auto& g = A.grid();
    std::vector<double> ratios;
    ratios.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (eta_support[i] <= 0.0) continue;
        if (B.rho(i) > 1e-300)
            ratios.push_back(A.rho(i) / B.rho(i));
        else if (A.rho(i) > 1e-12)
            ratios.push_back(kInf);
    }
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        const std::size_t mid = ratios.size() / 2;
        diag.ratio = ratios.size() % 2 == 1 ? ratios[mid]
                                            : 0.5 * (ratios[mid - 1] + ratios[mid]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (eta_support[i] <= 0.0) continue;
        num += eta_support[i] * std::abs(A.rho(i) - diag.ratio * B.rho(i));
        den += eta_support[i] * A.rho(i);
    }
    diag.homothety_residual = num / std::max(den, 1e-300);
    if (g.n == 2) diag.convexity_deficit = convexity_deficit_area(A);

    if (translation_search && g.n == 2) {
        const SupportFit fit = fit_support_shift(g, star_hull_support(A), star_hull_support(B));
        if (fit.ok) {
            diag.shift = fit.b;
            diag.ratio = fit.m;
            diag.homothety_residual = fit.residual;
        }
    }
    return diag;
}

EqualityDiagnosis equality_diagnostics_supports(const DirectionGrid& g,
                                                const std::vector<double>& hA,
                                                const std::vector<double>& hB,
                                                bool translation_search) {
    require(g.n == 2, "equality_diagnostics_supports: planar grids only");
    require(hA.size() == g.size() && hB.size() == g.size(),
            "equality_diagnostics_supports: supports do not match the grid");
    EqualityDiagnosis diag;
    std::vector<double> ratios;
    ratios.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(hB[i]) > 1e-300) ratios.push_back(hA[i] / hB[i]);
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        const std::size_t mid = ratios.size() / 2;
        diag.ratio = ratios.size() % 2 == 1 ? ratios[mid]
                                            : 0.5 * (ratios[mid - 1] + ratios[mid]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        num += g.weights[i] * std::abs(hA[i] - diag.ratio * hB[i]);
        den += g.weights[i] * std::abs(hA[i]);
    }
    diag.homothety_residual = num / std::max(den, 1e-300);
    if (translation_search) {
        const SupportFit fit = fit_support_shift(g, hA, hB);
        if (fit.ok) {
            diag.shift = fit.b;
            diag.ratio = fit.m;
            diag.homothety_residual = fit.residual;
        }
    }
    return diag;
}

DisintegratedMeasure mixture_measure(const std::vector<DisintegratedMeasure>& mus,
                                     const std::vector<double>& weights) {
    require(!mus.empty(), "mixture_measure: empty list");
    require(mus.size() == weights.size(), "mixture_measure: weights do not match the list");
    const DisintegratedMeasure& first = mus.front();
    for (const auto& m : mus) {
        require(same_grid(m.grid, first.grid), "mixture_measure: grid mismatch");
        require(m.law == first.law || m.law->describe() == first.law->describe(),
                "mixture_measure: all components must share the radial law");
        require(m.rho_B.size() == first.rho_B.size(), "mixture_measure: rho_B mismatch");
        for (std::size_t i = 0; i < m.rho_B.size(); ++i)
            require(std::abs(m.rho_B[i] - first.rho_B[i]) <= 1e-12 * std::max(1.0, first.rho_B[i]),
                    "mixture_measure: all components must share the body");
    }
    for (double w : weights) require(std::isfinite(w) && w > 0.0, "mixture_measure: weights must be positive");

    DisintegratedMeasure out;
    out.grid = first.grid;
    out.law = first.law;
    out.rho_B = first.rho_B;
    out.eta.assign(first.eta.size(), 0.0);
    for (std::size_t k = 0; k < mus.size(); ++k)
        for (std::size_t i = 0; i < out.eta.size(); ++i)
            out.eta[i] += weights[k] * mus[k].eta[i];
    out.c_eta = 0.0;
    for (double e : out.eta) out.c_eta += e;
    out.law_hat = scaled_law(out.c_eta, out.law);
    out.q_hom = first.q_hom;
    for (const auto& m : mus)
        if (!m.q_hom || !first.q_hom || std::abs(*m.q_hom - *first.q_hom) > 1e-15)
            out.q_hom = std::nullopt;
    return out;
}

DisintegratedMeasure rotate_measure_quarter(const DisintegratedMeasure& mu, int k) {
    require(mu.n() == 2, "rotate_measure_quarter: planar measures only");
    const std::size_t N = mu.size();
    require(N % 4 == 0, "rotate_measure_quarter: grid size must be divisible by 4");
    const std::size_t shift = (N / 4) * std::size_t(((k % 4) + 4) % 4);
    DisintegratedMeasure out = mu;
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t j = (i + N - shift) % N;
        out.eta[i] = mu.eta[j];
        out.rho_B[i] = mu.rho_B[j];
    }
    return out;
}

std::vector<IneqReport> closure_suite(const std::vector<DisintegratedMeasure>& mus,
                                      const std::vector<double>& weights,
                                      const std::array<double, 4>& T, double q, double q_prime,
                                      const CheckOptions& opt) {
    require(!mus.empty(), "closure_suite: empty measure list");
    for (const auto& m : mus) require(m.n() == 2, "closure_suite: planar measures only");
    require(q_prime >= q, "closure_suite: q' must not be below q");

    const DisintegratedMeasure mix = mixture_measure(mus, weights);
    const double det = T[0] * T[3] - T[1] * T[2];
    require(std::abs(det) > 1e-12, "closure_suite: T must be invertible");
    const std::array<double, 4> Tinv{T[3] / det, -T[1] / det, -T[2] / det, T[0] / det};

    const auto probes = closure_probes(mix.grid);
    std::vector<IneqReport> out;
    out.reserve(probes.size() * 3);
    for (const auto& pr : probes) {
        IneqReport r = check_cbm(mix, pr.A, pr.B, pr.lambda, q, opt);
        r.name = "closure_mixture/" + pr.tag;
        out.push_back(std::move(r));
    }
    for (const auto& pr : probes) {
        const StarBody TA = map_body_linear(pr.A, Tinv);
        const StarBody TB = map_body_linear(pr.B, Tinv);
        IneqReport r = check_cbm(mix, TA, TB, pr.lambda, q, opt);
        r.name = "closure_pushforward/" + pr.tag;
        std::ostringstream note;
        note << "probes pulled back through the inverse of T=[" << fmt_double(T[0]) << ","
             << fmt_double(T[1]) << ";" << fmt_double(T[2]) << "," << fmt_double(T[3]) << "]; ";
        r.notes += note.str();
        out.push_back(std::move(r));
    }
    for (const auto& pr : probes) {
        IneqReport r = check_cbm(mix, pr.A, pr.B, pr.lambda, q_prime, opt);
        r.name = "closure_monotone/" + pr.tag;
        r.notes += "exponent raised to q'=" + fmt_double(q_prime) + "; ";
        out.push_back(std::move(r));
    }
    return out;
}

ProfileSearchResult profile_search(const DisintegratedMeasure& mu, const ConvexBody& K,
                                   double v, int fourier_degree, int budget,
                                   std::uint64_t seed) {
    check_shared_grid(mu, K.grid_ptr(), "profile_search");
    require(mu.n() == 2, "profile_search: planar measures only");
    require(mu.q_hom.has_value() && *mu.q_hom < 0.0,
            "profile_search: homogeneous measure with q < 0 required");
    require(std::isfinite(v) && v > 0.0, "profile_search: target mass must be positive");
    require(fourier_degree >= 0 && budget > 0, "profile_search: bad search parameters");
    const double q = *mu.q_hom;

    const ExtNonneg cK = complement_mass(mu, K.as_star());
    require_finite_mass(cK, "profile_search: mu(complement of K) must be finite");
    require(cK > 0.0, "profile_search: mu(complement of K) must be positive");

    ProfileSearchResult res;
    res.bound = -(1.0 / q) * std::pow(double(cK), q) * std::pow(v, 1.0 - q);

    const auto& g = *mu.grid;
    const std::size_t N = g.size();
    const int dim = 2 * fourier_degree;
    std::vector<std::vector<double>> cosk(static_cast<std::size_t>(fourier_degree));
    std::vector<std::vector<double>> sink(static_cast<std::size_t>(fourier_degree));
    for (int k = 1; k <= fourier_degree; ++k) {
        cosk[std::size_t(k - 1)].resize(N);
        sink[std::size_t(k - 1)].resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            cosk[std::size_t(k - 1)][i] = std::cos(k * g.angles[i]);
            sink[std::size_t(k - 1)][i] = std::sin(k * g.angles[i]);
        }
    }

    int evals = 0;
    auto evaluate = [&](const std::vector<double>& x,
                        std::vector<double>* rho_out) -> double {
        ++evals;
        std::vector<double> rho(N);
        for (std::size_t i = 0; i < N; ++i) {
            double e = 0.0;
            for (int k = 0; k < fourier_degree; ++k)
                e += x[std::size_t(2 * k)] * cosk[std::size_t(k)][i] +
                     x[std::size_t(2 * k + 1)] * sink[std::size_t(k)][i];
            rho[i] = std::exp(e);
        }
        StarBody S(mu.grid, std::move(rho));
        const ExtNonneg c = measure_of_costar(mu, CoStar{S});
        if (!(c > 0.0) || c == kInf) return kInf;
        const StarBody Sv = scale(S, std::pow(v / double(c), q));
        const ExtNonneg b = boundary_measure(mu, CoStar{Sv}, K, BoundarySide::inner);
        if (rho_out) *rho_out = Sv.rho();
        return double(b);
    };

    if (dim == 0) {
        std::vector<double> none;
        res.best_boundary = evaluate(none, &res.best_rho);
        res.converged = true;
    } else {
        // Nelder-Mead from the ball vertex, seed-jittered companions.
        Rng rng(seed);
        std::vector<std::vector<double>> pts(std::size_t(dim) + 1,
                                             std::vector<double>(std::size_t(dim), 0.0));
        for (int j = 1; j <= dim; ++j) {
            for (int c = 0; c < dim; ++c)
                pts[std::size_t(j)][std::size_t(c)] = rng.uniform(-0.02, 0.02);
            pts[std::size_t(j)][std::size_t(j - 1)] += 0.15;
        }
        std::vector<double> f(pts.size());
        for (std::size_t j = 0; j < pts.size(); ++j) f[j] = evaluate(pts[j], nullptr);

        std::vector<std::size_t> ord(pts.size());
        while (evals < budget) {
            for (std::size_t j = 0; j < ord.size(); ++j) ord[j] = j;
            std::sort(ord.begin(), ord.end(),
                      [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
            const double spread = f[ord.back()] - f[ord.front()];
            if (spread <= 1e-12 * std::max(1.0, std::abs(f[ord.front()]))) {
                res.converged = true;
                break;
            }
            std::vector<double> centroid(std::size_t(dim), 0.0);
            for (std::size_t j = 0; j + 1 < ord.size(); ++j)
                for (int c = 0; c < dim; ++c)
                    centroid[std::size_t(c)] += pts[ord[j]][std::size_t(c)] / dim;
            const std::size_t iw = ord.back();
            auto blend = [&](double alpha) {
                std::vector<double> p(static_cast<std::size_t>(dim));
                for (int c = 0; c < dim; ++c)
                    p[std::size_t(c)] = centroid[std::size_t(c)] +
                                        alpha * (centroid[std::size_t(c)] - pts[iw][std::size_t(c)]);
                return p;
            };
            const std::vector<double> pr = blend(1.0);
            const double fr = evaluate(pr, nullptr);
            if (fr < f[ord.front()]) {
                const std::vector<double> pe = blend(2.0);
                const double fe = evaluate(pe, nullptr);
                if (fe < fr) {
                    pts[iw] = pe;
                    f[iw] = fe;
                } else {
                    pts[iw] = pr;
                    f[iw] = fr;
                }
            } else if (fr < f[ord[ord.size() - 2]]) {
                pts[iw] = pr;
                f[iw] = fr;
            } else {
                const bool outside = fr < f[iw];
                const std::vector<double> pc = blend(outside ? 0.5 : -0.5);
                const double fc = evaluate(pc, nullptr);
                if (fc < std::min(fr, f[iw])) {
                    pts[iw] = pc;
                    f[iw] = fc;
                } else {
                    for (std::size_t j = 1; j < ord.size(); ++j) {
                        for (int c = 0; c < dim; ++c)
                            pts[ord[j]][std::size_t(c)] =
                                0.5 * (pts[ord[j]][std::size_t(c)] + pts[ord[0]][std::size_t(c)]);
                        f[ord[j]] = evaluate(pts[ord[j]], nullptr);
                        if (evals >= budget) break;
                    }
                }
            }
        }
        std::size_t best = 0;
        for (std::size_t j = 1; j < pts.size(); ++j)
            if (f[j] < f[best]) best = j;
        res.best_boundary = evaluate(pts[best], &res.best_rho);
        for (double c : pts[best]) res.fourier_tail = std::max(res.fourier_tail, std::abs(c));
    }

    res.gap = res.best_boundary - res.bound;
    res.evaluations = evals;
    if (!res.best_rho.empty()) {
        const StarBody Sbest(mu.grid, res.best_rho);
        res.mass = double(measure_of_costar(mu, CoStar{Sbest}));
    }
    return res;
}

ConvexBody random_convex_body(const GridPtr& grid, Rng& rng) {
    const int n = grid->n;
    if (n == 1) {
        const double a = rng.uniform(0.3, 1.8), b = rng.uniform(0.3, 1.8);
        return ConvexBody::box(grid, Vec3{-a, 0.0, 0.0}, Vec3{b, 0.0, 0.0});
    }
    if (n == 3) {
        if (rng.below(2) == 0) return ConvexBody::ball(grid, rng.uniform(0.4, 1.8));
        const Vec3 lo{-rng.uniform(0.3, 1.5), -rng.uniform(0.3, 1.5), -rng.uniform(0.3, 1.5)};
        const Vec3 hi{rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5)};
        return ConvexBody::box(grid, lo, hi);
    }
    switch (rng.below(4)) {
        case 0:
            return ConvexBody::ball(grid, rng.uniform(0.4, 1.8));
        case 1: {
            const Vec3 lo{-rng.uniform(0.3, 1.5), -rng.uniform(0.3, 1.5), 0.0};
            const Vec3 hi{rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5), 0.0};
            return ConvexBody::box(grid, lo, hi);
        }
        case 2: {
            // Vertices in angular order on a rotated ellipse: always convex.
            const int k = 3 + int(rng.below(6));
            const double a = rng.uniform(0.5, 1.6), b = rng.uniform(0.5, 1.6);
            const double psi = rng.uniform(0.0, 2.0 * kPi);
            const double cp = std::cos(psi), sp = std::sin(psi);
            std::vector<std::array<double, 2>> v(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) {
                const double ang =
                    2.0 * kPi * j / k + rng.uniform(-0.2, 0.2) * (2.0 * kPi / k);
                const double x = a * std::cos(ang), y = b * std::sin(ang);
                v[std::size_t(j)] = {cp * x - sp * y, sp * x + cp * y};
            }
            return ConvexBody::polygon(grid, std::move(v));
        }
        default: {
            FourierDesc f;
            f.a0 = rng.uniform(0.8, 1.5);
            f.cos_coef = {0.0, rng.uniform(-0.02, 0.02) * f.a0, rng.uniform(-0.015, 0.015) * f.a0};
            f.sin_coef = {0.0, rng.uniform(-0.02, 0.02) * f.a0, rng.uniform(-0.015, 0.015) * f.a0};
            StarBody S = StarBody::fourier(grid, f);
            for (int halve = 0; halve < 8 && !is_convex_star(S); ++halve) {
                for (auto& c : f.cos_coef) c *= 0.5;
                for (auto& c : f.sin_coef) c *= 0.5;
                S = StarBody::fourier(grid, f);
            }
            if (!is_convex_star(S)) return ConvexBody::ball(grid, f.a0);
            return star_to_convex(S);
        }
    }
}

StarBody random_star_body(const GridPtr& grid, Rng& rng, bool allow_nonconvex) {
    if (grid->n != 2 || !allow_nonconvex || rng.below(2) == 0)
        return random_convex_body(grid, rng).as_star();
    FourierDesc f;
    f.a0 = rng.uniform(0.8, 1.5);
    f.cos_coef.assign(4, 0.0);
    f.sin_coef.assign(4, 0.0);
    for (std::size_t k = 1; k < 4; ++k) {
        f.cos_coef[k] = rng.uniform(-0.12, 0.12) * f.a0;
        f.sin_coef[k] = rng.uniform(-0.12, 0.12) * f.a0;
    }
    return StarBody::fourier(grid, f);
}

} // namespace geomineq
