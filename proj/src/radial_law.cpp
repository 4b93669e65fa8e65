#include "geomineq/radial_law.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geomineq {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm)) return kInf;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson with a relative target; endpoint values that are not
/// finite poison the result to +inf.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) return kInf;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = rel_tol * std::max(std::abs(whole), 1e-30);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

std::string fmt(double v) { return fmt_double(v); }

} // namespace

ExtNonneg RadialLaw::integral(double a, double b) const {
    if (!(a >= 0.0) || !(b >= a)) {
        throw std::invalid_argument("RadialLaw::integral: need 0 <= a <= b");
    }
    if (a == b) return 0.0;
    const LawTraits tr = traits();
    if (tr.tail_integrable) {
        const ExtNonneg pa = Phi(a);
        const ExtNonneg pb = (b == kInf) ? 0.0 : Phi(b);
        if (pa < kInf) return std::max(0.0, pa - pb);
        if (b < kInf) {
            // Divergent part lies below a only when a = 0; otherwise Phi(a)
            // is finite for tail-integrable laws.
            return kInf;
        }
        return kInf;
    }
    if (!tr.origin_nonintegrable) {
        if (b == kInf) return kInf; // tail not integrable
        const ExtNonneg gb = origin_integral(b);
        const ExtNonneg ga = origin_integral(a);
        if (gb < kInf) return std::max(0.0, gb - ga);
        return kInf;
    }
    throw std::domain_error("RadialLaw::integral: divergent at both ends, no direct formula");
}

double RadialLaw::log_phi_slope(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("log_phi_slope: t must be positive");
    const double d = 1e-6 * t;
    const double lo = phi(t - d);
    const double hi = phi(t + d);
    if (!(lo > 0.0) || !(hi > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::domain_error("log_phi_slope: phi not positive-finite near t");
    }
    return (std::log(hi) - std::log(lo)) / (2.0 * d);
}

namespace {

class PowerLaw final : public RadialLaw {
public:
    explicit PowerLaw(double a) : a_(a) {}

    double phi(double t) const override {
        if (t == 0.0) {
            if (a_ > 0.0) return kInf;
            if (a_ == 0.0) return 1.0;
            return 0.0;
        }
        return std::pow(t, -a_);
    }

    ExtNonneg Phi(double t) const override {
        if (t == kInf) return 0.0;
        if (a_ <= 1.0) return kInf;
        if (t == 0.0) return kInf;
        return std::pow(t, 1.0 - a_) / (a_ - 1.0);
    }

    ExtNonneg Phi_inv(double x) const override {
        if (a_ <= 1.0) throw std::domain_error("Phi_inv: tail not integrable for power law a <= 1");
        if (!(x >= 0.0)) throw std::invalid_argument("Phi_inv: negative argument");
        if (x == 0.0) return kInf;
        if (x == kInf) return 0.0;
        return std::pow((a_ - 1.0) * x, -1.0 / (a_ - 1.0));
    }

    ExtNonneg origin_integral(double t) const override {
        if (a_ >= 1.0) return (t == 0.0) ? 0.0 : kInf;
        if (t == kInf) return kInf;
        return std::pow(t, 1.0 - a_) / (1.0 - a_);
    }

    ExtNonneg integral(double a, double b) const override {
        if (!(a >= 0.0) || !(b >= a)) {
            throw std::invalid_argument("integral: need 0 <= a <= b");
        }
        if (a == b) return 0.0;
        if (a_ == 1.0) {
            if (a == 0.0 || b == kInf) return kInf;
            return std::log(b / a);
        }
        if (a_ > 1.0) {
            const double lo = (a == 0.0) ? kInf : std::pow(a, 1.0 - a_) / (a_ - 1.0);
            const double hi = (b == kInf) ? 0.0 : std::pow(b, 1.0 - a_) / (a_ - 1.0);
            if (lo == kInf) return kInf;
            return std::max(0.0, lo - hi);
        }
        if (b == kInf) return kInf;
        return std::max(0.0, (std::pow(b, 1.0 - a_) - std::pow(a, 1.0 - a_)) / (1.0 - a_));
    }

    double log_phi_slope(double t) const override { return -a_ / t; }

    LawTraits traits() const override {
        LawTraits tr;
        tr.nonincreasing = a_ >= 0.0;
        tr.origin_nonintegrable = a_ >= 1.0;
        tr.tail_integrable = a_ > 1.0;
        tr.log_convex = a_ >= 0.0;
        tr.strictly_log_convex = a_ > 0.0;
        tr.compact_support = false;
        return tr;
    }

    std::string describe() const override { return "power(a=" + fmt(a_) + ")"; }

private:
    double a_;
};

class PowerExpLaw final : public RadialLaw {
public:
    double phi(double t) const override {
        if (t == 0.0) return kInf;
        if (t == kInf) return 0.0;
        return std::exp(1.0 / t) / (t * t);
    }

    ExtNonneg Phi(double t) const override {
        if (t == kInf) return 0.0;
        if (t == 0.0) return kInf;
        return std::expm1(1.0 / t);
    }

    ExtNonneg Phi_inv(double x) const override {
        if (!(x >= 0.0)) throw std::invalid_argument("Phi_inv: negative argument");
        if (x == 0.0) return kInf;
        if (x == kInf) return 0.0;
        return 1.0 / std::log1p(x);
    }

    ExtNonneg origin_integral(double t) const override {
        return (t == 0.0) ? 0.0 : kInf;
    }

    ExtNonneg integral(double a, double b) const override {
        if (!(a >= 0.0) || !(b >= a)) {
            throw std::invalid_argument("integral: need 0 <= a <= b");
        }
        if (a == b) return 0.0;
        const ExtNonneg pa = Phi(a);
        const ExtNonneg pb = (b == kInf) ? 0.0 : Phi(b);
        if (pa == kInf) return kInf;
        return std::max(0.0, pa - pb);
    }

    double log_phi_slope(double t) const override { return -2.0 / t - 1.0 / (t * t); }

    LawTraits traits() const override {
        LawTraits tr;
        tr.nonincreasing = true;
        tr.origin_nonintegrable = true;
        tr.tail_integrable = true;
        tr.log_convex = true;
        tr.strictly_log_convex = true;
        tr.compact_support = false;
        return tr;
    }

    std::string describe() const override { return "power_exp"; }
};

class TableLaw final : public RadialLaw {
public:
    TableLaw(std::vector<double> knots, std::vector<double> values)
        : t_(std::move(knots)), v_(std::move(values)) {
        if (t_.empty() || t_.size() != v_.size()) {
            throw std::invalid_argument("table_law: knot/value size mismatch");
        }
        if (!(t_.front() > 0.0)) throw std::invalid_argument("table_law: knots must be positive");
        for (size_t i = 0; i + 1 < t_.size(); ++i) {
            if (!(t_[i] < t_[i + 1])) {
                throw std::invalid_argument("table_law: knots must be strictly increasing");
            }
        }
        bool any_positive = false;
        for (size_t i = 0; i < v_.size(); ++i) {
            if (!(v_[i] >= 0.0) || !std::isfinite(v_[i])) {
                throw std::invalid_argument("table_law: values must be finite and nonnegative");
            }
            if (i > 0 && v_[i] > v_[i - 1]) {
                throw std::invalid_argument("table_law: values must be non-increasing");
            }
            any_positive = any_positive || v_[i] > 0.0;
        }
        if (!any_positive) throw std::invalid_argument("table_law: all values zero");

        const size_t m = t_.size();
        tail_.assign(m, 0.0);
        tail_[m - 1] = (v_[m - 1] == 0.0) ? 0.0 : kInf;
        for (size_t i = m - 1; i-- > 0;) {
            tail_[i] = tail_[i + 1] + v_[i] * (t_[i + 1] - t_[i]);
        }
        g_.assign(m, 0.0);
        g_[0] = v_[0] * t_[0];
        for (size_t i = 1; i < m; ++i) {
            g_[i] = g_[i - 1] + v_[i - 1] * (t_[i] - t_[i - 1]);
        }
        phi0_ = tail_[0] + v_[0] * t_[0];
        support_end_ = kInf;
        if (v_[m - 1] == 0.0) {
            size_t z = m - 1;
            while (z > 0 && v_[z - 1] == 0.0) --z;
            support_end_ = t_[z];
        }
    }

    double phi(double s) const override {
        if (s == kInf) return v_.back();
        const long i = piece(s);
        return (i < 0) ? v_[0] : v_[static_cast<size_t>(i)];
    }

    ExtNonneg Phi(double s) const override {
        if (s == kInf) return (v_.back() == 0.0) ? 0.0 : kInf;
        if (v_.back() > 0.0) return kInf;
        const long i = piece(s);
        if (i < 0) return tail_[0] + v_[0] * (t_[0] - s);
        const size_t ui = static_cast<size_t>(i);
        if (ui + 1 >= t_.size()) return 0.0;
        return tail_[ui + 1] + v_[ui] * (t_[ui + 1] - s);
    }

    ExtNonneg Phi_inv(double x) const override {
        if (v_.back() > 0.0) throw std::domain_error("Phi_inv: table tail not integrable");
        if (!(x >= 0.0)) throw std::invalid_argument("Phi_inv: negative argument");
        if (x > phi0_) {
            // Absorb rounding from piecewise mass sums; anything larger is a
            // genuine domain error.
            if (x <= phi0_ * (1.0 + 1e-9)) {
                x = phi0_;
            } else {
                throw std::domain_error("Phi_inv: argument exceeds total tail mass");
            }
        }
        if (x == 0.0) return support_end_;
        if (x >= tail_[0]) {
            return t_[0] - (x - tail_[0]) / v_[0];
        }
        // Find i with tail_[i] > x >= tail_[i+1]; Phi is strictly decreasing
        // on [t_i, t_{i+1}] there (v_[i] > 0).
        size_t lo = 0;
        size_t hi = t_.size() - 1;
        while (lo + 1 < hi) {
            const size_t mid = (lo + hi) / 2;
            if (tail_[mid] > x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return t_[lo + 1] - (x - tail_[lo + 1]) / v_[lo];
    }

    ExtNonneg origin_integral(double s) const override {
        if (s == kInf) return phi0_ == kInf ? kInf : (v_.back() == 0.0 ? phi0_ : kInf);
        const long i = piece(s);
        if (i < 0) return v_[0] * s;
        const size_t ui = static_cast<size_t>(i);
        return g_[ui] + v_[ui] * (s - t_[ui]);
    }

    ExtNonneg integral(double a, double b) const override {
        if (!(a >= 0.0) || !(b >= a)) {
            throw std::invalid_argument("integral: need 0 <= a <= b");
        }
        if (b == kInf) return Phi(a);
        return std::max(0.0, origin_integral(b) - origin_integral(a));
    }

    double log_phi_slope(double) const override { return 0.0; }

    double support_end() const override { return support_end_; }

    LawTraits traits() const override {
        LawTraits tr;
        tr.nonincreasing = true;
        tr.origin_nonintegrable = false;
        tr.tail_integrable = v_.back() == 0.0;
        tr.compact_support = v_.back() == 0.0;
        bool same = true;
        double first_pos = -1.0;
        for (double v : v_) {
            if (v > 0.0) {
                if (first_pos < 0.0) first_pos = v;
                same = same && v == first_pos;
            }
        }
        // Any drop between positive values breaks midpoint convexity of
        // log(phi), and so does dropping to zero: log(phi) jumps to -inf while
        // staying finite before the jump.
        tr.log_convex = same && v_.back() > 0.0;
        tr.strictly_log_convex = false;
        return tr;
    }

    std::string describe() const override {
        return "table(" + fmt(static_cast<double>(t_.size())) + " knots)";
    }

private:
    // Index i with t_[i] <= s < t_[i+1]; -1 when s < t_[0].
    long piece(double s) const {
        if (s < t_[0]) return -1;
        const auto it = std::upper_bound(t_.begin(), t_.end(), s);
        return static_cast<long>(it - t_.begin()) - 1;
    }

    std::vector<double> t_;
    std::vector<double> v_;
    std::vector<double> tail_; // Phi at knots
    std::vector<double> g_;    // origin integral at knots
    double phi0_ = 0.0;        // Phi(0+), the total mass
    double support_end_ = kInf;
};

class ScaledLaw final : public RadialLaw {
public:
    ScaledLaw(double c, LawPtr base) : c_(c), base_(std::move(base)) {
        if (!(c_ > 0.0) || !std::isfinite(c_)) {
            throw std::invalid_argument("scaled_law: scale must be positive finite");
        }
        if (!base_) throw std::invalid_argument("scaled_law: null base law");
    }

    double phi(double t) const override { return ext_mul(c_, base_->phi(t)); }
    ExtNonneg Phi(double t) const override { return ext_mul(c_, base_->Phi(t)); }
    ExtNonneg Phi_inv(double x) const override { return base_->Phi_inv(x / c_); }
    ExtNonneg origin_integral(double t) const override {
        return ext_mul(c_, base_->origin_integral(t));
    }
    ExtNonneg integral(double a, double b) const override {
        return ext_mul(c_, base_->integral(a, b));
    }
    double log_phi_slope(double t) const override { return base_->log_phi_slope(t); }
    double support_end() const override { return base_->support_end(); }
    LawTraits traits() const override { return base_->traits(); }
    std::string describe() const override {
        return "scaled(c=" + fmt(c_) + ", " + base_->describe() + ")";
    }

private:
    double c_;
    LawPtr base_;
};

class FunctionLaw final : public RadialLaw {
public:
    FunctionLaw(std::function<double(double)> fn, LawTraits tr, std::string label,
                double support_end)
        : fn_(std::move(fn)), tr_(tr), label_(std::move(label)), support_end_(support_end) {
        if (!fn_) throw std::invalid_argument("function_law: null density");
        if (!(support_end_ > 0.0)) throw std::invalid_argument("function_law: bad support end");
    }

    double phi(double t) const override {
        if (t >= support_end_) return 0.0;
        return fn_(t);
    }

    ExtNonneg Phi(double t) const override {
        if (!tr_.tail_integrable) return kInf;
        if (t >= support_end_) return 0.0;
        if (t == 0.0) return tr_.origin_nonintegrable ? kInf : Phi(1e-300);
        if (support_end_ < kInf) {
            return adaptive_simpson([this](double s) { return phi(s); }, t, support_end_, 1e-13);
        }
        // Geometric pieces upward; tail integrability makes the series converge.
        double total = 0.0;
        double a = t;
        for (int k = 0; k < 2100; ++k) {
            const double b = a * 2.0;
            const double piece =
                adaptive_simpson([this](double s) { return phi(s); }, a, b, 1e-13);
            if (piece == kInf) return kInf;
            total += piece;
            if (piece <= 1e-14 * total + 1e-300) break;
            a = b;
        }
        return total;
    }

    ExtNonneg Phi_inv(double x) const override {
        if (!tr_.tail_integrable) throw std::domain_error("Phi_inv: tail not integrable");
        if (!(x >= 0.0)) throw std::invalid_argument("Phi_inv: negative argument");
        if (x == 0.0) return support_end_;
        if (x == kInf) return 0.0;
        double lo = 1.0;
        double hi = (support_end_ < kInf) ? support_end_ : 1.0;
        if (support_end_ == kInf) {
            while (Phi(hi) > x) {
                hi *= 2.0;
                if (hi > 1e150) return kInf;
            }
        }
        if (lo > hi) lo = hi;
        while (Phi(lo) < x) {
            lo *= 0.5;
            if (lo < 1e-150) {
                throw std::domain_error("Phi_inv: argument exceeds total tail mass");
            }
        }
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (Phi(mid) > x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return hi;
    }

    ExtNonneg origin_integral(double t) const override {
        if (tr_.origin_nonintegrable) return (t == 0.0) ? 0.0 : kInf;
        if (t == 0.0) return 0.0;
        const double top = std::min(t, support_end_);
        double total = 0.0;
        double b = top;
        for (int k = 0; k < 2100; ++k) {
            const double a = b * 0.5;
            const double piece =
                adaptive_simpson([this](double s) { return phi(s); }, a, b, 1e-13);
            if (piece == kInf) return kInf;
            total += piece;
            if (piece <= 1e-14 * total + 1e-300) break;
            b = a;
        }
        return total;
    }

    double support_end() const override { return support_end_; }
    LawTraits traits() const override { return tr_; }
    std::string describe() const override { return "function(" + label_ + ")"; }

private:
    std::function<double(double)> fn_;
    LawTraits tr_;
    std::string label_;
    double support_end_;
};

} // namespace

LawPtr power_law(double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("power_law: a must be finite");
    return std::make_shared<PowerLaw>(a);
}

LawPtr power_exp_law() { return std::make_shared<PowerExpLaw>(); }

LawPtr table_law(const std::vector<double>& knots, const std::vector<double>& values) {
    return std::make_shared<TableLaw>(knots, values);
}

LawPtr scaled_law(double c, LawPtr base) {
    return std::make_shared<ScaledLaw>(c, std::move(base));
}

LawPtr function_law(std::function<double(double)> phi, LawTraits traits, std::string label,
                    double support_end) {
    return std::make_shared<FunctionLaw>(std::move(phi), traits, std::move(label), support_end);
}

ExtNonneg iso_profile(const RadialLaw& law, ExtNonneg x) {
    if (!(x >= 0.0)) throw std::invalid_argument("iso_profile: negative argument");
    if (x == kInf) throw std::domain_error("iso_profile: infinite level mass");
    const ExtNonneg u = law.Phi_inv(x);
    if (u == kInf) return 0.0; // phi(inf) = 0 convention
    return law.phi(u);
}

void validate_law_shape(const RadialLaw& law) {
    const int n = 1000;
    const double lo = 1e-6;
    const double hi = 1e6;
    const double ratio = std::pow(hi / lo, 1.0 / (n - 1));
    double t = lo;
    double prev = kInf;
    for (int i = 0; i < n; ++i, t *= ratio) {
        const double v = law.phi(t);
        if (std::isnan(v) || v < 0.0) {
            throw std::domain_error("validate_law_shape: phi must be nonnegative");
        }
        if (prev < kInf && v > prev * (1.0 + 1e-12) + 1e-300) {
            throw std::domain_error("validate_law_shape: phi must be non-increasing");
        }
        if (v < kInf) prev = v;
    }
}

} // namespace geomineq
