#include "geomineq/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geomineq {

namespace {

std::string interval_str(const IntervalUnion& u) {
    if (u.empty()) return "{}";
    std::ostringstream os;
    for (size_t i = 0; i < u.parts().size(); ++i) {
        const auto& p = u.parts()[i];
        if (i) os << "+";
        os << "[" << p.lo << ",";
        if (p.hi == kInf) {
            os << "inf";
        } else {
            os << p.hi;
        }
        os << ")";
    }
    return os.str();
}

} // namespace

IntervalUnion IntervalUnion::from_intervals(std::vector<Interval> parts) {
    for (const auto& p : parts) {
        if (!(p.lo >= 0.0) || !(p.hi > p.lo)) {
            throw std::invalid_argument("IntervalUnion: need 0 <= lo < hi");
        }
        if (p.lo == kInf) throw std::invalid_argument("IntervalUnion: lo must be finite");
    }
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IntervalUnion out;
    for (const auto& p : parts) {
        if (!out.parts_.empty() && p.lo <= out.parts_.back().hi) {
            out.parts_.back().hi = std::max(out.parts_.back().hi, p.hi);
        } else {
            out.parts_.push_back(p);
        }
    }
    return out;
}

IntervalUnion IntervalUnion::halfline(double z) {
    return from_intervals({{z, kInf}});
}

ExtNonneg IntervalUnion::length() const {
    double total = 0.0;
    for (const auto& p : parts_) {
        if (p.hi == kInf) return kInf;
        total += p.hi - p.lo;
    }
    return total;
}

IntervalUnion IntervalUnion::dilate_right(double d) const {
    if (!(d >= 0.0)) throw std::invalid_argument("dilate_right: negative amount");
    std::vector<Interval> parts = parts_;
    for (auto& p : parts) {
        if (p.hi < kInf) p.hi += d;
    }
    return from_intervals(std::move(parts));
}

IntervalUnion IntervalUnion::complement_in_halfline() const {
    std::vector<Interval> out;
    double cursor = 0.0;
    for (const auto& p : parts_) {
        if (p.lo > cursor) out.push_back({cursor, p.lo});
        cursor = p.hi;
        if (cursor == kInf) break;
    }
    if (cursor < kInf) out.push_back({cursor, kInf});
    IntervalUnion u;
    u.parts_ = std::move(out); // already sorted and disjoint
    return u;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& a, const IntervalUnion& b) {
    std::vector<Interval> out;
    size_t i = 0;
    size_t j = 0;
    while (i < a.parts_.size() && j < b.parts_.size()) {
        const Interval& x = a.parts_[i];
        const Interval& y = b.parts_[j];
        const double lo = std::max(x.lo, y.lo);
        const double hi = std::min(x.hi, y.hi);
        if (lo < hi) out.push_back({lo, hi});
        if (x.hi < y.hi) {
            ++i;
        } else {
            ++j;
        }
    }
    IntervalUnion u;
    u.parts_ = std::move(out);
    return u;
}

IntervalUnion IntervalUnion::difference(const IntervalUnion& a, const IntervalUnion& b) {
    // a minus b == a intersect complement(b); complement relative to [0,inf)
    // is enough because everything lives in the half-line.
    return intersect(a, b.complement_in_halfline());
}

ExtNonneg measure_of_union(const RadialLaw& law, const IntervalUnion& u) {
    double total = 0.0;
    for (const auto& p : u.parts()) {
        const ExtNonneg piece = law.integral(p.lo, p.hi);
        if (piece == kInf) return kInf;
        total += piece;
    }
    return total;
}

ExtNonneg boundary_1d(const RadialLaw& law, const IntervalUnion& C, double b) {
    if (!(b > 0.0)) throw std::invalid_argument("boundary_1d: b must be positive");
    double total = 0.0;
    for (const auto& p : C.parts()) {
        if (p.lo > 0.0) {
            const double v = law.phi(p.lo);
            if (v == kInf) return kInf;
            total += v;
        }
    }
    return b * total;
}

IneqReport ocbm_1d(const RadialLaw& law, const IntervalUnion& A, double b, double t,
                   double rel_tolerance) {
    if (!(b > 0.0)) throw std::invalid_argument("ocbm_1d: b must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("ocbm_1d: t must be nonnegative");

    const ExtNonneg cmass_a = measure_of_union(law, A.complement_in_halfline());
    if (cmass_a == kInf) {
        throw std::domain_error("ocbm_1d: complement of A has infinite mass");
    }
    if (!law.traits().origin_nonintegrable) {
        // For laws of finite total mass the complement-mass condition is
        // vacuous; the inequality needs A to actually cover the origin.
        if (A.empty() || A.parts().front().lo > 0.0) {
            throw std::domain_error("ocbm_1d: A must cover a neighborhood of the origin");
        }
    }
    const ExtNonneg cmass_b = law.Phi(b);
    if (cmass_b == kInf) {
        throw std::domain_error("ocbm_1d: law tail is not integrable");
    }

    const ExtNonneg lhs =
        measure_of_union(law, A.dilate_right(t * b).complement_in_halfline());
    const ExtNonneg arg = law.Phi_inv(cmass_a) + t * law.Phi_inv(cmass_b);
    const ExtNonneg rhs = law.Phi(arg);

    std::ostringstream witness;
    witness << "A=" << interval_str(A) << "; b=" << b << "; t=" << t
            << "; law=" << law.describe();
    return make_report("ocbm_1d", lhs, rhs, Orientation::LE, rel_tolerance,
                       CheckMode::assert_mode, "closed_form", witness.str());
}

ConvexityCheck check_logconvex(const RadialLaw& law, int grid_points, double lo, double hi) {
    if (grid_points < 3 || !(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("check_logconvex: bad grid");
    }
    std::vector<double> g(static_cast<size_t>(grid_points));
    const double ratio = std::pow(hi / lo, 1.0 / (grid_points - 1));
    double t = lo;
    for (auto& v : g) {
        v = t;
        t *= ratio;
    }
    ConvexityCheck out;
    out.min_defect = kInf;
    const int gaps[] = {1, 4, 16, 64};
    for (int gap : gaps) {
        for (size_t i = 0; i + static_cast<size_t>(gap) < g.size(); ++i) {
            const double s = g[i];
            const double u = g[i + static_cast<size_t>(gap)];
            const double ls = std::log(law.phi(s));
            const double lu = std::log(law.phi(u));
            const double lm = std::log(law.phi(0.5 * (s + u)));
            const double defect = 0.5 * (ls + lu) - lm;
            if (std::isnan(defect)) continue; // both sides -inf: vacuous probe
            out.min_defect = std::min(out.min_defect, defect);
        }
    }
    if (out.min_defect == kInf) out.min_defect = 0.0; // no usable probes
    out.pass = out.min_defect >= -1e-9;
    out.strict = out.min_defect > 1e-12;
    return out;
}

FConcavityCheck check_F_concavity(const RadialLaw& law, double t0, int grid_points) {
    if (!(t0 > 0.0)) throw std::invalid_argument("check_F_concavity: t0 must be positive");
    if (grid_points < 8) throw std::invalid_argument("check_F_concavity: grid too small");
    if (!law.traits().tail_integrable) {
        throw std::domain_error("check_F_concavity: law tail is not integrable");
    }

    double x_hi = 1e3;
    const ExtNonneg total = law.Phi(1e-300);
    if (total < kInf) x_hi = std::min(x_hi, 0.999 * total);
    const double x_lo = std::min(1e-3, 1e-6 * x_hi);

    std::vector<double> xs(static_cast<size_t>(grid_points));
    const double ratio = std::pow(x_hi / x_lo, 1.0 / (grid_points - 1));
    double x = x_lo;
    for (auto& v : xs) {
        v = x;
        x *= ratio;
    }

    const auto F = [&](double v) -> double {
        const ExtNonneg u = law.Phi_inv(v);
        if (u == kInf) return 0.0;
        return law.Phi(u + t0);
    };

    FConcavityCheck out;
    out.min_defect = kInf;
    const int gaps[] = {1, 4, 16};
    for (int gap : gaps) {
        for (size_t i = 0; i + static_cast<size_t>(gap) < xs.size(); ++i) {
            const double a = xs[i];
            const double b = xs[i + static_cast<size_t>(gap)];
            const double defect = F(0.5 * (a + b)) - 0.5 * (F(a) + F(b));
            if (std::isnan(defect)) continue;
            out.min_defect = std::min(out.min_defect, defect);
        }
    }
    if (out.min_defect == kInf) out.min_defect = 0.0;
    out.pass = out.min_defect >= -1e-9 * std::max(1.0, std::abs(F(xs.front())));

    // Profile-derivative identity: d/dx phi(Phi_inv(x)) = -(log phi)'(Phi_inv(x)).
    out.iprime_max_err = 0.0;
    out.iprime_ok = true;
    for (size_t i = 0; i < xs.size(); i += 8) {
        const double v = xs[i];
        const double h = 1e-5 * v;
        const double num =
            (iso_profile(law, v + h) - iso_profile(law, v - h)) / (2.0 * h);
        const ExtNonneg u = law.Phi_inv(v);
        if (u == kInf || u == 0.0) continue;
        double formula;
        try {
            formula = -law.log_phi_slope(u);
        } catch (const std::domain_error&) {
            continue; // phi not smooth here (step laws)
        }
        const double err = std::abs(num - formula) / std::max(std::abs(formula), 1.0);
        out.iprime_max_err = std::max(out.iprime_max_err, err);
    }
    out.iprime_ok = out.iprime_max_err <= 1e-6;
    return out;
}

HalfLineDiagnosis equality_shape_1d(const RadialLaw& law, const IntervalUnion& C, double b) {
    HalfLineDiagnosis d;
    const ExtNonneg mass = measure_of_union(law, C);
    if (mass == kInf) {
        throw std::domain_error("equality_shape_1d: C has infinite mass");
    }
    d.mass = mass;
    const ExtNonneg bd = boundary_1d(law, C, b);
    d.boundary = bd;
    d.profile_bound = b * iso_profile(law, mass);
    const double scale = std::max({d.boundary, d.profile_bound, 1e-12});
    d.equality_holds = bd < kInf && std::abs(d.boundary - d.profile_bound) <= 1e-9 * scale;

    if (C.empty()) {
        d.is_halfline = true;
        d.offending_mass = 0.0;
        return d;
    }
    const ExtNonneg z = law.Phi_inv(mass);
    const IntervalUnion h = IntervalUnion::halfline(z == kInf ? 0.0 : z);
    if (z == kInf) {
        // mass = 0 but C nonempty: C is null for the law; call it empty-ish.
        d.is_halfline = true;
        d.offending_mass = 0.0;
        return d;
    }
    const ExtNonneg extra = measure_of_union(law, IntervalUnion::difference(C, h));
    const ExtNonneg missing = measure_of_union(law, IntervalUnion::difference(h, C));
    d.offending_mass = (extra == kInf || missing == kInf) ? kInf : extra + missing;
    d.is_halfline = d.offending_mass <= 1e-9 * std::max(1.0, d.mass);
    return d;
}

} // namespace geomineq
