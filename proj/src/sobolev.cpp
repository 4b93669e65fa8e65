#include "geomineq/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "geomineq/exponent.hpp"
#include "geomineq/interval.hpp"
#include "geomineq/verify.hpp"
#include "geomineq/voxel.hpp"

namespace geomineq {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
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

/// Radial pushforward of mu under the gauge of K: closed-form masses of
/// gauge balls, annuli and survival tails, plus the face content |dS/dr|.
/// Homogeneous measures scale exactly (also as discrete sums); other
/// measures require the gauge to be homothetic to the measure body, so the
/// normalized law applies directly.
struct RadialFrame {
    bool homogeneous = false;
    double q = 0.0;
    double unit = 0.0; // S(1) when the origin mass diverges, V(1) otherwise
    LawPtr hat;        // set on the non-homogeneous route
    double c = 1.0;    // gauge = c * measure body on that route
    bool origin_infinite = false;

    ExtNonneg survival(double r) const { // mu({gauge >= r})
        if (hat) return hat->Phi(c * r);
        if (origin_infinite) return r > 0.0 ? unit * std::pow(r, 1.0 / q) : kInf;
        return kInf; // q > 0: infinite total mass at infinity
    }
    ExtNonneg ball(double r) const { // mu({gauge <= r})
        if (hat) return hat->origin_integral(c * r);
        if (origin_infinite) return r > 0.0 ? kInf : 0.0;
        return r > 0.0 ? unit * std::pow(r, 1.0 / q) : 0.0;
    }
    ExtNonneg annulus(double a, double b) const { // 0 <= a <= b <= inf
        if (!(b > a)) return 0.0;
        if (hat) return hat->integral(c * a, b == kInf ? kInf : c * b);
        if (origin_infinite) {
            if (a <= 0.0) return kInf;
            const double sa = unit * std::pow(a, 1.0 / q);
            const double sb = b == kInf ? 0.0 : unit * std::pow(b, 1.0 / q);
            return std::max(0.0, sa - sb);
        }
        if (b == kInf) return kInf;
        return std::max(0.0, unit * std::pow(b, 1.0 / q) - unit * std::pow(a, 1.0 / q));
    }
    double face(double r) const { // |d/dr mu({gauge >= r})|
        if (hat) return c * hat->phi(c * r);
        return unit * std::abs(1.0 / q) * std::pow(r, 1.0 / q - 1.0);
    }
};

RadialFrame make_frame(const ConvexBody& gauge, const DisintegratedMeasure& mu) {
    const StarBody S = gauge.as_star();
    require(same_grid(S.grid(), *mu.grid), "sobolev: gauge must live on the measure grid");
    RadialFrame fr;
    if (mu.q_hom) {
        fr.homogeneous = true;
        fr.q = *mu.q_hom;
        require(fr.q != 0.0, "sobolev: degenerate homogeneity exponent");
        fr.origin_infinite = fr.q < 0.0;
        fr.unit = fr.origin_infinite ? measure_of_costar(mu, CoStar{S}) : measure_of_star(mu, S);
        require(fr.unit > 0.0 && fr.unit < kInf,
                "sobolev: unit gauge body must carry positive finite mass");
        return fr;
    }
    require(static_cast<bool>(mu.law_hat), "sobolev: measure lacks a radial law");
    const auto ratio = homothety_ratio(S.rho(), mu.rho_B);
    require(ratio.has_value(),
            "sobolev: for a non-homogeneous measure the gauge must be homothetic to the "
            "measure body");
    fr.hat = mu.law_hat;
    fr.c = *ratio;
    fr.origin_infinite = mu.law->traits().origin_nonintegrable;
    return fr;
}

/// |g| with zero-crossing knots inserted, so values are nonnegative and the
/// superlevel combinatorics is a plain threshold walk.
struct AbsProfile {
    std::vector<double> r, v; // v[0] == 0; beyond r.back() the value stays v.back()
    double vmax = 0.0;
};

AbsProfile abs_profile(const RadialFunction& f) {
    AbsProfile p;
    p.r.push_back(0.0);
    p.v.push_back(0.0);
    for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
        const double a = f.values[i], b = f.values[i + 1];
        if (a * b < 0.0) {
            const double x = f.knots[i] + (f.knots[i + 1] - f.knots[i]) * (a / (a - b));
            if (x > p.r.back()) {
                p.r.push_back(x);
                p.v.push_back(0.0);
            }
        }
        p.r.push_back(f.knots[i + 1]);
        p.v.push_back(std::abs(b));
    }
    for (double v : p.v) p.vmax = std::max(p.vmax, v);
    return p;
}

struct RadSeg {
    double a, b; // b may be +inf
};

/// {r >= 0 : |g|(r) >= t} as merged radial intervals, t > 0.
std::vector<RadSeg> superlevel(const AbsProfile& p, double t) {
    std::vector<RadSeg> out;
    auto push = [&out](double a, double b) {
        if (!out.empty() && a <= out.back().b)
            out.back().b = std::max(out.back().b, b);
        else
            out.push_back({a, b});
    };
    for (std::size_t i = 0; i + 1 < p.r.size(); ++i) {
        const double a = p.v[i], b = p.v[i + 1];
        const double ra = p.r[i], rb = p.r[i + 1];
        if (a >= t && b >= t)
            push(ra, rb);
        else if (a >= t && b < t)
            push(ra, ra + (rb - ra) * ((a - t) / (a - b)));
        else if (a < t && b >= t)
            push(ra + (rb - ra) * ((t - a) / (b - a)), rb);
    }
    if (p.v.back() >= t) push(p.r.back(), kInf);
    return out;
}

ExtNonneg mass_of_level(const RadialFrame& fr, const AbsProfile& p, double t) {
    ExtNonneg sum = 0.0;
    for (const auto& s : superlevel(p, t)) {
        const ExtNonneg m = fr.annulus(s.a, s.b);
        if (m == kInf) return kInf;
        sum += m;
    }
    return sum;
}

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps = 1e-12 * (std::abs(whole) + 1e-300);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, eps, 48);
}

double maximize(const std::function<double(double)>& obj, double a, double b) {
    const int S = 64;
    double best = obj(b), best_t = b;
    for (int i = 0; i < S; ++i) {
        const double t = a + (b - a) * (static_cast<double>(i) + 0.5) / S;
        const double v = obj(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double lo = std::max(a, best_t - (b - a) / S);
    double hi = std::min(b, best_t + (b - a) / S);
    const double gr = 0.3819660112501051;
    double x1 = lo + gr * (hi - lo), x2 = hi - gr * (hi - lo);
    double f1 = obj(x1), f2 = obj(x2);
    for (int it = 0; it < 160 && hi - lo > 1e-15 * (b - a); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - gr * (hi - lo);
            f2 = obj(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + gr * (hi - lo);
            f1 = obj(x1);
        }
    }
    return std::max({best, f1, f2});
}

/// Critical values of the profile (plateaus and kinks), ascending with 0 in
/// front; every t-integrand is smooth strictly between consecutive entries.
std::vector<double> critical_values(const AbsProfile& p) {
    std::vector<double> c(p.v);
    c.push_back(0.0);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

bool origin_touching(const RadialFrame& fr, const AbsProfile& p) {
    return fr.origin_infinite && p.v.size() > 1 && p.v[1] > 0.0;
}

std::string gauge_tag(const RadialFunction& f) {
    std::ostringstream os;
    os << "f: pl knots=" << f.knots.size() << " sup=" << fmt_double(f.max_abs())
       << " | gauge=" << describe_body(f.gauge);
    return os.str();
}

} // namespace

RadialFunction RadialFunction::make(ConvexBody gauge, std::vector<double> knots,
                                    std::vector<double> values) {
    require(!knots.empty() && knots.size() == values.size(),
            "RadialFunction: knots and values must match and be nonempty");
    require(knots.front() == 0.0, "RadialFunction: first knot must be 0");
    require(values.front() == 0.0, "RadialFunction: profile must vanish at 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require(std::isfinite(values[i]), "RadialFunction: values must be finite");
        if (i) require(knots[i] > knots[i - 1], "RadialFunction: knots must increase");
    }
    return RadialFunction{std::move(gauge), std::move(knots), std::move(values)};
}

double RadialFunction::value(double r) const {
    if (r <= 0.0) return 0.0;
    if (r >= knots.back()) return values.back();
    const auto it = std::upper_bound(knots.begin(), knots.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    const double w = (r - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

double RadialFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double grad_modulus(const RadialFunction& f, double r) {
    require(r >= 0.0, "grad_modulus: radius must be nonnegative");
    auto slope = [&f](std::size_t i) {
        return std::abs((f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i]));
    };
    if (r >= f.knots.back())
        return r == f.knots.back() && f.knots.size() > 1 ? slope(f.knots.size() - 2) : 0.0;
    const auto it = std::upper_bound(f.knots.begin(), f.knots.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - f.knots.begin()) - 1;
    if (r == f.knots[i] && i > 0) return std::max(slope(i - 1), slope(i));
    return slope(i);
}

ExtNonneg total_gradient_mass(const RadialFunction& f, const DisintegratedMeasure& mu) {
    const RadialFrame fr = make_frame(f.gauge, mu);
    ExtNonneg sum = 0.0;
    for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
        const double s =
            std::abs((f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i]));
        if (s == 0.0) continue;
        const ExtNonneg am = fr.annulus(f.knots[i], f.knots[i + 1]);
        if (am == kInf) return kInf;
        sum += s * am;
    }
    return sum;
}

QuasiNormProfile lorentz_profile(double alpha) {
    require(alpha > 0.0, "lorentz_profile: alpha must be positive");
    std::ostringstream os;
    os << "x^(1/alpha), alpha=" << fmt_double(alpha);
    return {[alpha](ExtNonneg x) -> ExtNonneg { return std::pow(x, 1.0 / alpha); },
            os.str()};
}

QuasiNormProfile measure_profile(const DisintegratedMeasure& mu, const ConvexBody& gauge) {
    const RadialFrame fr = make_frame(gauge, mu);
    if (fr.homogeneous) {
        const double q = fr.q;
        const double coef = std::abs(1.0 / q) * std::pow(fr.unit, q);
        return {[coef, q](ExtNonneg x) -> ExtNonneg { return coef * std::pow(x, 1.0 - q); },
                "measure profile (homogeneous)"};
    }
    const LawPtr hat = fr.hat;
    const double c = fr.c;
    return {[hat, c](ExtNonneg x) -> ExtNonneg { return c * iso_profile(*hat, x); },
            "measure profile (radial law)"};
}

WeakNorms weak_norms(const RadialFunction& f, const DisintegratedMeasure& mu,
                     const QuasiNormProfile& profile, std::optional<double> alpha,
                     std::optional<double> beta) {
    const RadialFrame fr = make_frame(f.gauge, mu);
    const AbsProfile p = abs_profile(f);
    const QuasiNormProfile& I = alpha ? lorentz_profile(*alpha) : profile;
    if (beta) require(*beta > 0.0, "weak_norms: beta must be positive");

    WeakNorms out;
    out.L_inf = p.vmax;
    out.L_beta = std::numeric_limits<double>::quiet_NaN();
    if (p.vmax == 0.0) {
        out.L_Phi_1 = out.L_Phi_inf = out.L_1 = 0.0;
        if (beta) out.L_beta = 0.0;
        return out;
    }
    if (origin_touching(fr, p)) {
        out.L_Phi_1 = out.L_Phi_inf = out.L_1 = kInf;
        if (beta) out.L_beta = kInf;
        return out;
    }
    if (p.v.back() > 0.0 && fr.annulus(p.r.back(), kInf) == kInf)
        throw std::invalid_argument("weak_norms: a positive level set has infinite measure");

    const double floor_t = p.vmax * 1e-14;
    auto mass = [&fr, &p, floor_t](double t) {
        return mass_of_level(fr, p, std::max(t, floor_t));
    };
    const std::vector<double> crit = critical_values(p);
    for (std::size_t j = 0; j + 1 < crit.size(); ++j) {
        const double a = crit[j], b = crit[j + 1];
        out.L_Phi_1 += integrate([&](double t) { return I.I(mass(t)); }, a, b);
        out.L_1 += integrate([&](double t) { return mass(t); }, a, b);
        out.L_Phi_inf =
            std::max(out.L_Phi_inf, maximize([&](double t) { return t * I.I(mass(t)); }, a, b));
        if (beta) {
            const double bb = *beta;
            if (!(out.L_beta == out.L_beta)) out.L_beta = 0.0; // first segment: NaN -> 0
            out.L_beta += integrate([&](double u) { return mass(std::pow(u, 1.0 / bb)); },
                                    std::pow(a, bb), std::pow(b, bb));
        }
    }
    if (beta) out.L_beta = std::pow(out.L_beta, 1.0 / *beta);
    return out;
}

IneqReport check_sobolev(const RadialFunction& f, const DisintegratedMeasure& mu,
                         SobolevVariant variant, std::optional<double> beta,
                         double rel_tolerance) {
    const RadialFrame fr = make_frame(f.gauge, mu);
    const AbsProfile p = abs_profile(f);
    const ExtNonneg grad = total_gradient_mass(f, mu);
    const std::string tag = gauge_tag(f) + " | law=" + mu.law->describe();

    const bool cor_variant = variant == SobolevVariant::weak_L1 ||
                             variant == SobolevVariant::L_beta ||
                             variant == SobolevVariant::nash;
    if (cor_variant)
        require(fr.homogeneous && fr.q < 0.0,
                "check_sobolev: this variant requires a homogeneous measure with q < 0");

    if (variant == SobolevVariant::weak_L1 || variant == SobolevVariant::L_beta ||
        variant == SobolevVariant::nash) {
        const double q = fr.q;
        const double alpha = 1.0 / (1.0 - q);
        const double C1 = (-1.0 / q) * std::pow(fr.unit, q);
        std::ostringstream note;
        note << "alpha=" << fmt_double(alpha) << " C1=" << fmt_double(C1);

        if (variant == SobolevVariant::weak_L1) {
            const WeakNorms nm = weak_norms(f, mu, lorentz_profile(alpha));
            return make_report("sobolev_weak_L1", grad, ext_mul(C1, nm.L_Phi_1),
                               Orientation::GE, rel_tolerance, CheckMode::assert_mode,
                               "closed_form+quadrature", tag, note.str());
        }
        if (variant == SobolevVariant::L_beta) {
            const double b = beta.value_or(alpha / 2.0);
            require(b > 0.0 && b < alpha, "check_sobolev: beta must lie in (0, alpha)");
            const WeakNorms nm = weak_norms(f, mu, lorentz_profile(alpha), {}, b);
            const double factor = C1 * std::pow((alpha - b) / alpha, 1.0 / b);
            note << " beta=" << fmt_double(b) << " L_beta=" << fmt_double(nm.L_beta)
                 << "; classical-constant bound, recorded as a diagnostic";
            return make_report("sobolev_L_beta", grad, ext_mul(factor, nm.L_beta),
                               Orientation::GE, rel_tolerance, CheckMode::diagnostic,
                               "closed_form+quadrature", tag, note.str());
        }
        const double C2 = std::pow(C1, -alpha);
        const WeakNorms nm = weak_norms(f, mu, lorentz_profile(alpha));
        const ExtNonneg rhs =
            ext_mul(C2, ext_mul(std::pow(grad, alpha), std::pow(nm.L_inf, 1.0 - alpha)));
        note.str("");
        note << "alpha=" << fmt_double(alpha) << " C2=" << fmt_double(C2)
             << " grad=" << fmt_double(grad);
        return make_report("sobolev_nash", nm.L_1, rhs, Orientation::LE, rel_tolerance,
                           CheckMode::assert_mode, "closed_form+quadrature", tag, note.str());
    }

    if (variant == SobolevVariant::coarea) {
        ExtNonneg rhs = 0.0;
        if (origin_touching(fr, p)) {
            rhs = kInf;
        } else if (p.vmax > 0.0) {
            const double floor_t = p.vmax * 1e-14;
            auto faces = [&](double t) {
                double s = 0.0;
                for (const auto& seg : superlevel(p, std::max(t, floor_t))) {
                    s += fr.face(seg.a);
                    if (seg.b < kInf) s += fr.face(seg.b);
                }
                return s;
            };
            const std::vector<double> crit = critical_values(p);
            for (std::size_t j = 0; j + 1 < crit.size(); ++j)
                rhs += integrate(faces, crit[j], crit[j + 1]);
        }
        return make_report("sobolev_coarea", grad, rhs, Orientation::GE, rel_tolerance,
                           CheckMode::assert_mode, "closed_form+quadrature", tag,
                           "level-set boundary measures integrated over the height");
    }

    const WeakNorms nm = weak_norms(f, mu, measure_profile(mu, f.gauge));
    return make_report("sobolev_functional_equiv", grad, nm.L_Phi_1, Orientation::GE,
                       rel_tolerance, CheckMode::assert_mode, "closed_form+quadrature", tag,
                       "L_Phi_1 taken with the measure's own isoperimetric profile");
}

namespace {

// ---- functional combination: shared threshold scheme ----

std::vector<double> positive_thresholds(const std::vector<double>& fv,
                                        const std::vector<double>& gv, double far) {
    std::vector<double> t;
    t.reserve(fv.size() + gv.size() + 1);
    for (double v : fv)
        if (v > 0.0) t.push_back(v);
    for (double v : gv)
        if (v > 0.0) t.push_back(v);
    if (far > 0.0) t.push_back(far);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

// ---- 1-D route: exact interval arithmetic on the whole line ----

struct RInterval {
    double lo, hi; // lo may be -inf, hi may be +inf
};

std::vector<RInterval> merge_line(std::vector<RInterval> v) {
    std::sort(v.begin(), v.end(),
              [](const RInterval& a, const RInterval& b) { return a.lo < b.lo; });
    std::vector<RInterval> out;
    for (const auto& iv : v) {
        if (!(iv.hi > iv.lo)) continue;
        if (!out.empty() && iv.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

std::vector<RInterval> sum_line(const std::vector<RInterval>& u, double wu,
                                const std::vector<RInterval>& v, double wv) {
    std::vector<RInterval> out;
    out.reserve(u.size() * v.size());
    for (const auto& a : u)
        for (const auto& b : v)
            out.push_back({wu * a.lo + wv * b.lo, wu * a.hi + wv * b.hi});
    return merge_line(std::move(out));
}

std::vector<RInterval> complement_line(const std::vector<RInterval>& s) {
    std::vector<RInterval> out;
    double cur = -kInf;
    for (const auto& iv : s) {
        if (iv.lo > cur) out.push_back({cur, iv.lo});
        cur = std::max(cur, iv.hi);
    }
    if (cur < kInf) out.push_back({cur, kInf});
    return out;
}

/// mu-mass of a union of line intervals: the two rays integrate the law with
/// the per-ray density phi(r / rho_B) / rho_B.
ExtNonneg line_mass(const DisintegratedMeasure& mu, const std::vector<RInterval>& s) {
    auto ray = [&mu](std::size_t i, double a, double b) -> ExtNonneg {
        if (!(b > a) || mu.eta[i] == 0.0) return 0.0;
        const double rb = mu.rho_B[i];
        return ext_mul(mu.eta[i], mu.law->integral(a / rb, b == kInf ? kInf : b / rb));
    };
    ExtNonneg sum = 0.0;
    for (const auto& iv : s) {
        const ExtNonneg pos = ray(0, std::max(iv.lo, 0.0), iv.hi);
        const ExtNonneg neg =
            ray(1, std::max(-iv.hi, 0.0), iv.lo == -kInf ? kInf : -iv.lo);
        if (pos == kInf || neg == kInf) return kInf;
        sum += pos + neg;
    }
    return sum;
}

void validate_step(const StepFunction1D& f, const char* who) {
    require(f.edges.size() >= 2 && f.values.size() + 1 == f.edges.size(),
            "functional_cbm: step function needs k+1 edges for k values");
    for (std::size_t i = 0; i + 1 < f.edges.size(); ++i)
        require(f.edges[i + 1] > f.edges[i] && std::isfinite(f.edges[i]),
                "functional_cbm: edges must be finite and increasing");
    require(std::isfinite(f.edges.back()), "functional_cbm: edges must be finite");
    for (double v : f.values)
        require(v >= 0.0 && std::isfinite(v), "functional_cbm: values must be nonnegative");
    require(f.far_value >= 0.0 && std::isfinite(f.far_value),
            "functional_cbm: far value must be nonnegative");
    (void)who;
}

std::vector<RInterval> step_sublevel(const StepFunction1D& f, double s) {
    std::vector<RInterval> out;
    if (f.far_value <= s) {
        out.push_back({-kInf, f.edges.front()});
        out.push_back({f.edges.back(), kInf});
    }
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.values[i] <= s) out.push_back({f.edges[i], f.edges[i + 1]});
    return merge_line(std::move(out));
}

std::vector<RInterval> step_superlevel(const StepFunction1D& f, double t) {
    std::vector<RInterval> out;
    if (f.far_value >= t) {
        out.push_back({-kInf, f.edges.front()});
        out.push_back({f.edges.back(), kInf});
    }
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.values[i] >= t) out.push_back({f.edges[i], f.edges[i + 1]});
    return merge_line(std::move(out));
}

} // namespace

IneqReport functional_cbm(const StepFunction1D& f, const StepFunction1D& g, double lambda,
                          const DisintegratedMeasure& mu, double q, double rel_tolerance) {
    require(mu.n() == 1, "functional_cbm: this overload needs a 1-D measure");
    require(lambda > 0.0 && lambda < 1.0, "functional_cbm: lambda must lie in (0,1)");
    require(q < 0.0, "functional_cbm: q must be negative");
    validate_step(f, "f");
    validate_step(g, "g");
    require(f.far_value == g.far_value, "functional_cbm: far values must match");

    const std::vector<double> tv = positive_thresholds(f.values, g.values, f.far_value);
    ExtNonneg int_f = 0.0, int_g = 0.0, int_h = 0.0;
    double prev = 0.0;
    for (double t : tv) {
        const double dt = t - prev;
        const ExtNonneg mf = line_mass(mu, step_superlevel(f, t));
        const ExtNonneg mg = line_mass(mu, step_superlevel(g, t));
        if (mf == kInf || mg == kInf)
            throw std::invalid_argument(
                "functional_cbm: a positive level set has infinite measure");
        int_f += dt * mf;
        int_g += dt * mg;
        if (prev < f.far_value) { // sublevels at prev are bounded: exact sums
            const auto S = sum_line(step_sublevel(f, prev), lambda, step_sublevel(g, prev),
                                    1.0 - lambda);
            const ExtNonneg mh = line_mass(mu, complement_line(S));
            if (mh == kInf) return make_report("functional_cbm_1d", kInf, kInf,
                                               Orientation::LE, rel_tolerance);
            int_h += dt * mh;
        } // otherwise both sublevels reach both tails and the sum covers the line
        prev = t;
    }

    const ExtNonneg rhs = power_mean(int_f, int_g, lambda, Exponent::finite(q));
    std::ostringstream w;
    w << "f: k=" << f.values.size() << " g: k=" << g.values.size()
      << " far=" << fmt_double(f.far_value) << " | lambda=" << fmt_double(lambda)
      << " q=" << fmt_double(q) << " | law=" << mu.law->describe();
    return make_report("functional_cbm_1d", int_h, rhs, Orientation::LE, rel_tolerance,
                       CheckMode::assert_mode, "intervals", w.str(),
                       "extremal h from exact sublevel interval sums");
}

GridFunction2D indicator_complement(const StarBody& A, double lo, double hi, double h) {
    const VoxelSet vs = voxelize(A, lo, hi, h, VoxelFill::center);
    GridFunction2D gf;
    gf.lo = lo;
    gf.h = h;
    gf.m = vs.m;
    gf.far_value = 1.0;
    gf.values.assign(vs.m * vs.m, 1.0);
    for (std::size_t iy = 0; iy < vs.m; ++iy)
        for (std::size_t ix = 0; ix < vs.m; ++ix)
            if (vs.bit(ix, iy)) gf.values[iy * vs.m + ix] = 0.0;
    return gf;
}

IneqReport functional_cbm(const GridFunction2D& f, const GridFunction2D& g, double lambda,
                          const DisintegratedMeasure& mu, double q, double rel_tolerance) {
    require(mu.n() == 2, "functional_cbm: this overload needs a planar measure");
    require(lambda > 0.0 && lambda < 1.0, "functional_cbm: lambda must lie in (0,1)");
    require(q < 0.0, "functional_cbm: q must be negative");
    require(f.m >= 2 && f.m == g.m && f.lo == g.lo && f.h == g.h,
            "functional_cbm: f and g must share the window");
    require(f.values.size() == f.m * f.m && g.values.size() == g.m * g.m,
            "functional_cbm: value array must fill the window");
    require(f.far_value == g.far_value, "functional_cbm: far values must match");
    const double hi = f.lo + static_cast<double>(f.m - 1) * f.h;
    require(f.lo < 0.0 && hi > 0.0, "functional_cbm: window must contain the origin");
    for (double v : f.values)
        require(v >= 0.0 && std::isfinite(v), "functional_cbm: values must be nonnegative");
    for (double v : g.values)
        require(v >= 0.0 && std::isfinite(v), "functional_cbm: values must be nonnegative");

    const DensitySampler sampler = make_density_sampler(mu);
    const ExtNonneg outside = measure_of_costar(
        mu, CoStar{StarBody::box(mu.grid, {f.lo, f.lo, 0.0}, {hi, hi, 0.0})});

    auto mask_of = [&](const GridFunction2D& fn, double s, bool at_most) {
        VoxelSet vs = make_window(fn.lo, hi, fn.h);
        for (std::size_t iy = 0; iy < fn.m; ++iy)
            for (std::size_t ix = 0; ix < fn.m; ++ix) {
                const double v = fn.values[iy * fn.m + ix];
                if (at_most ? v <= s : v >= s) vs.set_bit(ix, iy);
            }
        return vs;
    };
    auto super_mass = [&](const GridFunction2D& fn, double t) -> ExtNonneg {
        const VoxelMass vm = voxel_measure(sampler, mask_of(fn, t, false));
        ExtNonneg m = vm.value;
        if (fn.far_value >= t) m += outside;
        return m;
    };

    const std::vector<double> tv = positive_thresholds(f.values, g.values, f.far_value);
    ExtNonneg int_f = 0.0, int_g = 0.0, int_h = 0.0;
    double prev = 0.0;
    for (double t : tv) {
        const double dt = t - prev;
        const ExtNonneg mf = super_mass(f, t);
        const ExtNonneg mg = super_mass(g, t);
        if (mf == kInf || mg == kInf)
            throw std::invalid_argument(
                "functional_cbm: a positive level set has infinite measure");
        int_f += dt * mf;
        int_g += dt * mg;
        if (prev < f.far_value) {
            const VoxelSet S = voxel_minkowski(mask_of(f, prev, true), mask_of(g, prev, true),
                                               lambda, 1.0 - lambda, /*clip=*/true);
            const VoxelMass inwin = voxel_measure(sampler, voxel_not(S));
            if (inwin.value == kInf)
                return make_report("functional_cbm_2d", kInf, kInf, Orientation::LE,
                                   rel_tolerance);
            int_h += dt * (inwin.value + outside);
        }
        prev = t;
    }

    const ExtNonneg rhs = power_mean(int_f, int_g, lambda, Exponent::finite(q));
    std::ostringstream w;
    w << "window=[" << fmt_double(f.lo) << "," << fmt_double(hi) << "]^2 h="
      << fmt_double(f.h) << " far=" << fmt_double(f.far_value)
      << " | lambda=" << fmt_double(lambda) << " q=" << fmt_double(q)
      << " | law=" << mu.law->describe();
    return make_report("functional_cbm_2d", int_h, rhs, Orientation::LE, rel_tolerance,
                       CheckMode::assert_mode, "voxel", w.str(),
                       "extremal h from lattice sublevel sums; sums clipped at the window");
}

} // namespace geomineq
