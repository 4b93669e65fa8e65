#include "geomineq/body.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "geomineq/common.hpp"

namespace geomineq {

namespace {

struct EdgeData {
    double nx, ny; // outward unit normal
    double h;      // offset <n, v>, positive when the origin is inside
    double psi;    // normal angle
};

std::vector<EdgeData> polygon_edge_data(const PolygonDesc& P) {
    const std::size_t m = P.verts.size();
    std::vector<EdgeData> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = P.verts[i];
        const auto& b = P.verts[(i + 1) % m];
        const double dx = b[0] - a[0];
        const double dy = b[1] - a[1];
        const double len = std::hypot(dx, dy);
        if (!(len > 0.0)) throw std::invalid_argument("polygon: repeated vertex");
        EdgeData e;
        e.nx = dy / len;
        e.ny = -dx / len;
        e.h = e.nx * a[0] + e.ny * a[1];
        e.psi = std::atan2(e.ny, e.nx);
        out[i] = e;
    }
    return out;
}

void validate_polygon(const PolygonDesc& P) {
    const std::size_t m = P.verts.size();
    if (m < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
    double scale = 0.0;
    for (const auto& v : P.verts) {
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
            throw std::invalid_argument("polygon: non-finite vertex");
        scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = P.verts[i];
        const auto& b = P.verts[(i + 1) % m];
        const auto& c = P.verts[(i + 2) % m];
        const double cross =
            (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (!(cross > 0.0))
            throw std::invalid_argument("polygon: vertices must be strictly convex ccw");
    }
    for (const auto& e : polygon_edge_data(P)) {
        if (!(e.h > 0.0))
            throw std::invalid_argument("polygon: origin must be strictly inside");
    }
    (void)scale;
}

void validate_box(const BoxDesc& b, int n) {
    for (int k = 0; k < 3; ++k) {
        if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k]))
            throw std::invalid_argument("box: non-finite bound");
        if (k < n) {
            if (!(b.lo[k] <= 0.0 && 0.0 <= b.hi[k]))
                throw std::invalid_argument("box: must contain the origin (lo <= 0 <= hi)");
            if (!(b.hi[k] - b.lo[k] > 0.0))
                throw std::invalid_argument("box: degenerate side");
        } else if (b.lo[k] != 0.0 || b.hi[k] != 0.0) {
            throw std::invalid_argument("box: trailing coordinates must be zero");
        }
    }
}

double fourier_rho(const FourierDesc& f, double theta) {
    double r = f.a0;
    for (std::size_t k = 0; k < f.cos_coef.size(); ++k)
        r += f.cos_coef[k] * std::cos(double(k + 1) * theta);
    for (std::size_t k = 0; k < f.sin_coef.size(); ++k)
        r += f.sin_coef[k] * std::sin(double(k + 1) * theta);
    return r;
}

double fourier_drho(const FourierDesc& f, double theta) {
    double r = 0.0;
    for (std::size_t k = 0; k < f.cos_coef.size(); ++k)
        r -= double(k + 1) * f.cos_coef[k] * std::sin(double(k + 1) * theta);
    for (std::size_t k = 0; k < f.sin_coef.size(); ++k)
        r += double(k + 1) * f.sin_coef[k] * std::cos(double(k + 1) * theta);
    return r;
}

/// Radial value of a descriptor in a unit direction; quiet nullopt for
/// monostate so callers can fall back to grid interpolation.
std::optional<double> desc_rho(const Descriptor& d, const Vec3& u) {
    if (std::holds_alternative<BallDesc>(d)) return std::get<BallDesc>(d).r;
    if (std::holds_alternative<BoxDesc>(d)) {
        const auto& b = std::get<BoxDesc>(d);
        double t = kInf;
        for (int k = 0; k < 3; ++k) {
            if (u[k] > 0.0)
                t = std::min(t, b.hi[k] / u[k]);
            else if (u[k] < 0.0)
                t = std::min(t, b.lo[k] / u[k]);
        }
        return t;
    }
    if (std::holds_alternative<PolygonDesc>(d)) {
        const auto& P = std::get<PolygonDesc>(d);
        double t = kInf;
        for (const auto& e : polygon_edge_data(P)) {
            const double den = e.nx * u[0] + e.ny * u[1];
            if (den > 0.0) t = std::min(t, e.h / den);
        }
        return t;
    }
    if (std::holds_alternative<FourierDesc>(d))
        return fourier_rho(std::get<FourierDesc>(d), std::atan2(u[1], u[0]));
    return std::nullopt;
}

std::optional<double> desc_support(const Descriptor& d, const Vec3& v) {
    if (std::holds_alternative<BallDesc>(d)) return std::get<BallDesc>(d).r * norm3(v);
    if (std::holds_alternative<BoxDesc>(d)) {
        const auto& b = std::get<BoxDesc>(d);
        double h = 0.0;
        for (int k = 0; k < 3; ++k) h += std::max(b.hi[k] * v[k], b.lo[k] * v[k]);
        return h;
    }
    if (std::holds_alternative<PolygonDesc>(d)) {
        const auto& P = std::get<PolygonDesc>(d);
        double h = -kInf;
        for (const auto& w : P.verts) h = std::max(h, w[0] * v[0] + w[1] * v[1]);
        return h;
    }
    return std::nullopt; // fourier bodies have no closed-form support
}

Descriptor scale_desc(const Descriptor& d, double t) {
    if (std::holds_alternative<BallDesc>(d)) return BallDesc{std::get<BallDesc>(d).r * t};
    if (std::holds_alternative<BoxDesc>(d)) {
        auto b = std::get<BoxDesc>(d);
        for (int k = 0; k < 3; ++k) {
            b.lo[k] *= t;
            b.hi[k] *= t;
        }
        return b;
    }
    if (std::holds_alternative<PolygonDesc>(d)) {
        auto p = std::get<PolygonDesc>(d);
        for (auto& v : p.verts) {
            v[0] *= t;
            v[1] *= t;
        }
        return p;
    }
    if (std::holds_alternative<FourierDesc>(d)) {
        auto f = std::get<FourierDesc>(d);
        f.a0 *= t;
        for (auto& c : f.cos_coef) c *= t;
        for (auto& s : f.sin_coef) s *= t;
        return f;
    }
    return std::monostate{};
}

PolygonDesc box_as_polygon(const BoxDesc& b) {
    PolygonDesc p;
    p.verts = {{b.hi[0], b.lo[1]}, {b.hi[0], b.hi[1]}, {b.lo[0], b.hi[1]}, {b.lo[0], b.lo[1]}};
    return p;
}

double polygon_area(const std::vector<std::array<double, 2>>& v) {
    double a = 0.0;
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % m];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

std::size_t bottom_vertex(const std::vector<std::array<double, 2>>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i][1] < v[best][1] || (v[i][1] == v[best][1] && v[i][0] < v[best][0])) best = i;
    }
    return best;
}

/// Exact Minkowski sum of two convex ccw polygons by the rotating edge merge.
PolygonDesc poly_minkowski(const PolygonDesc& A, const PolygonDesc& B, double wa, double wb) {
    auto pa = A.verts;
    auto pb = B.verts;
    for (auto& v : pa) {
        v[0] *= wa;
        v[1] *= wa;
    }
    for (auto& v : pb) {
        v[0] *= wb;
        v[1] *= wb;
    }
    const std::size_t na = pa.size(), nb = pb.size();
    const std::size_t sa = bottom_vertex(pa), sb = bottom_vertex(pb);
    auto edge = [](const std::vector<std::array<double, 2>>& v, std::size_t start,
                   std::size_t off) {
        const auto& p = v[(start + off) % v.size()];
        const auto& q = v[(start + off + 1) % v.size()];
        return std::array<double, 2>{q[0] - p[0], q[1] - p[1]};
    };
    auto ang = [](const std::array<double, 2>& e) {
        double a = std::atan2(e[1], e[0]);
        if (a < -1e-12) a += 2.0 * kPi; // bottom-start ccw edges sweep [0, 2pi)
        return a;
    };
    std::vector<std::array<double, 2>> out;
    double cx = pa[sa][0] + pb[sb][0];
    double cy = pa[sa][1] + pb[sb][1];
    std::size_t ia = 0, ib = 0;
    while (ia < na || ib < nb) {
        out.push_back({cx, cy});
        std::array<double, 2> step{0.0, 0.0};
        if (ia >= na) {
            step = edge(pb, sb, ib++);
        } else if (ib >= nb) {
            step = edge(pa, sa, ia++);
        } else {
            const auto ea = edge(pa, sa, ia);
            const auto eb = edge(pb, sb, ib);
            const double aa = ang(ea), ab = ang(eb);
            if (std::abs(aa - ab) < 1e-12) {
                step = {ea[0] + eb[0], ea[1] + eb[1]};
                ++ia;
                ++ib;
            } else if (aa < ab) {
                step = ea;
                ++ia;
            } else {
                step = eb;
                ++ib;
            }
        }
        cx += step[0];
        cy += step[1];
    }
    // Drop numerically collinear vertices so the result validates as strictly convex.
    double scale = 0.0;
    for (const auto& v : out) scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
    std::vector<std::array<double, 2>> clean;
    const std::size_t m = out.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = out[(i + m - 1) % m];
        const auto& b = out[i];
        const auto& c = out[(i + 1) % m];
        const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (cross > 1e-12 * std::max(1.0, scale * scale)) clean.push_back(b);
    }
    PolygonDesc R;
    R.verts = std::move(clean);
    return R;
}

/// Radius of (box + s * unit ball) along u: the largest t with
/// dist(t u, box) <= s, solved exactly on the piecewise-quadratic segments of
/// the squared distance.
double rounded_box_rho(const BoxDesc& box, double s, const Vec3& u) {
    std::vector<double> bps{0.0};
    for (int k = 0; k < 3; ++k) {
        if (u[k] > 0.0)
            bps.push_back(box.hi[k] / u[k]);
        else if (u[k] < 0.0)
            bps.push_back(box.lo[k] / u[k]);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::remove_if(bps.begin(), bps.end(), [](double t) { return t < 0.0; }),
              bps.end());
    bps.push_back(kInf);
    for (std::size_t seg = 0; seg + 1 < bps.size(); ++seg) {
        const double t0 = bps[seg], t1 = bps[seg + 1];
        if (!(t1 > t0)) continue;
        const double tm = std::isfinite(t1) ? 0.5 * (t0 + t1) : 2.0 * t0 + 1.0;
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double x = tm * u[k];
            double c;
            if (x > box.hi[k])
                c = box.hi[k];
            else if (x < box.lo[k])
                c = box.lo[k];
            else
                continue;
            alpha += u[k] * u[k];
            beta += u[k] * c;
            gamma += c * c;
        }
        // squared distance on this segment: alpha t^2 - 2 beta t + gamma
        const double f1 = std::isfinite(t1)
                              ? alpha * t1 * t1 - 2.0 * beta * t1 + gamma - s * s
                              : (alpha > 0.0 ? kInf : gamma - s * s);
        if (f1 <= 0.0) continue;
        if (alpha <= 0.0) return t0; // constant positive excess: boundary at segment start
        const double disc = beta * beta - alpha * (gamma - s * s);
        if (disc < 0.0) return t0;
        return (beta + std::sqrt(disc)) / alpha;
    }
    return kInf; // unreachable for a unit direction
}

double interp_direction(const DirectionGrid& g, const std::vector<double>& vals,
                        const Vec3& u) {
    if (g.n == 1) return u[0] > 0.0 ? vals[0] : vals[1];
    if (g.n == 2) return grid_lerp(g, vals, std::atan2(u[1], u[0]));
    // n = 3: inverse-angle blend of the three closest grid nodes.
    const std::size_t N = g.size();
    std::size_t best[3] = {0, 0, 0};
    double bd[3] = {-2.0, -2.0, -2.0};
    for (std::size_t i = 0; i < N; ++i) {
        const double d = dot3(g.dirs[i], u);
        if (d > bd[0]) {
            bd[2] = bd[1];
            best[2] = best[1];
            bd[1] = bd[0];
            best[1] = best[0];
            bd[0] = d;
            best[0] = i;
        } else if (d > bd[1]) {
            bd[2] = bd[1];
            best[2] = best[1];
            bd[1] = d;
            best[1] = i;
        } else if (d > bd[2]) {
            bd[2] = d;
            best[2] = i;
        }
    }
    if (bd[0] >= 1.0 - 1e-14) return vals[best[0]];
    double wsum = 0.0, acc = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double angle = std::acos(std::clamp(bd[k], -1.0, 1.0));
        const double w = 1.0 / (angle + 1e-12);
        wsum += w;
        acc += w * vals[best[k]];
    }
    return acc / wsum;
}

std::vector<double> eval_desc_rho_on_grid(const Descriptor& d, const DirectionGrid& g) {
    std::vector<double> rho(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto v = desc_rho(d, g.dirs[i]);
        rho[i] = v ? *v : 0.0;
    }
    return rho;
}

std::vector<double> eval_desc_support_on_grid(const Descriptor& d, const DirectionGrid& g) {
    std::vector<double> h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = *desc_support(d, g.dirs[i]);
    return h;
}

bool is_ball(const Descriptor& d) { return std::holds_alternative<BallDesc>(d); }
bool is_box(const Descriptor& d) { return std::holds_alternative<BoxDesc>(d); }
bool is_polyish(const Descriptor& d) {
    return std::holds_alternative<PolygonDesc>(d) || std::holds_alternative<BoxDesc>(d);
}
PolygonDesc as_polygon(const Descriptor& d) {
    if (std::holds_alternative<PolygonDesc>(d)) return std::get<PolygonDesc>(d);
    return box_as_polygon(std::get<BoxDesc>(d));
}

} // namespace

StarBody::StarBody(GridPtr grid, std::vector<double> rho, Descriptor desc)
    : grid_(std::move(grid)), rho_(std::move(rho)), desc_(std::move(desc)) {
    if (!grid_) throw std::invalid_argument("StarBody: null grid");
    if (rho_.size() != grid_->size())
        throw std::invalid_argument("StarBody: radial values do not match the grid");
    for (double r : rho_) {
        if (!std::isfinite(r) || r < 0.0)
            throw std::invalid_argument("StarBody: radial values must be finite and >= 0");
    }
}

StarBody StarBody::ball(GridPtr grid, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ball: radius must be positive");
    std::vector<double> rho(grid->size(), r);
    return StarBody(std::move(grid), std::move(rho), BallDesc{r});
}

StarBody StarBody::box(GridPtr grid, const Vec3& lo, const Vec3& hi) {
    BoxDesc d{lo, hi};
    validate_box(d, grid->n);
    auto rho = eval_desc_rho_on_grid(d, *grid);
    return StarBody(std::move(grid), std::move(rho), d);
}

StarBody StarBody::polygon(GridPtr grid, std::vector<std::array<double, 2>> verts) {
    if (grid->n != 2) throw std::invalid_argument("polygon: requires a planar grid");
    PolygonDesc d{std::move(verts)};
    validate_polygon(d);
    auto rho = eval_desc_rho_on_grid(d, *grid);
    return StarBody(std::move(grid), std::move(rho), std::move(d));
}

StarBody StarBody::fourier(GridPtr grid, FourierDesc f) {
    if (grid->n != 2) throw std::invalid_argument("fourier body: requires a planar grid");
    std::vector<double> rho(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        rho[i] = fourier_rho(f, grid->angles[i]);
        if (!(rho[i] >= 0.0))
            throw std::invalid_argument("fourier body: radial function must be nonnegative");
    }
    return StarBody(std::move(grid), std::move(rho), std::move(f));
}

double StarBody::rho_in_direction(const Vec3& u) const {
    if (auto v = desc_rho(desc_, u)) return *v;
    return interp_direction(*grid_, rho_, u);
}

double StarBody::rho_at_angle(double theta) const {
    if (grid_->n != 2) throw std::logic_error("rho_at_angle: planar bodies only");
    Vec3 u{std::cos(theta), std::sin(theta), 0.0};
    if (auto v = desc_rho(desc_, u)) return *v;
    return grid_lerp(*grid_, rho_, theta);
}

double StarBody::rho_prime_at_angle(double theta) const {
    if (grid_->n != 2) throw std::logic_error("rho_prime_at_angle: planar bodies only");
    if (std::holds_alternative<BallDesc>(desc_)) return 0.0;
    if (std::holds_alternative<FourierDesc>(desc_))
        return fourier_drho(std::get<FourierDesc>(desc_), theta);
    if (is_polyish(desc_)) {
        const auto P = as_polygon(desc_);
        const Vec3 u{std::cos(theta), std::sin(theta), 0.0};
        double t = kInf;
        double psi = 0.0;
        for (const auto& e : polygon_edge_data(P)) {
            const double den = e.nx * u[0] + e.ny * u[1];
            if (den > 0.0 && e.h / den < t) {
                t = e.h / den;
                psi = e.psi;
            }
        }
        return t * std::tan(theta - psi); // rho(theta) = h_e / cos(theta - psi_e)
    }
    const double d = 2.0 * kPi / double(grid_->size());
    return (rho_at_angle(theta + d) - rho_at_angle(theta - d)) / (2.0 * d);
}

ConvexBody::ConvexBody(GridPtr grid, std::vector<double> rho, std::vector<double> support,
                       Descriptor desc)
    : grid_(std::move(grid)),
      rho_(std::move(rho)),
      support_(std::move(support)),
      desc_(std::move(desc)) {
    if (!grid_) throw std::invalid_argument("ConvexBody: null grid");
    if (rho_.size() != grid_->size() || support_.size() != grid_->size())
        throw std::invalid_argument("ConvexBody: value arrays do not match the grid");
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        if (!std::isfinite(rho_[i]) || rho_[i] < 0.0 || !std::isfinite(support_[i]))
            throw std::invalid_argument("ConvexBody: non-finite values");
        if (support_[i] < rho_[i] * (1.0 - 1e-9) - 1e-12)
            throw std::invalid_argument("ConvexBody: support below radial value");
    }
}

ConvexBody ConvexBody::ball(GridPtr grid, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ball: radius must be positive");
    std::vector<double> rho(grid->size(), r), h(grid->size(), r);
    return ConvexBody(std::move(grid), std::move(rho), std::move(h), BallDesc{r});
}

ConvexBody ConvexBody::box(GridPtr grid, const Vec3& lo, const Vec3& hi) {
    BoxDesc d{lo, hi};
    validate_box(d, grid->n);
    auto rho = eval_desc_rho_on_grid(d, *grid);
    auto h = eval_desc_support_on_grid(d, *grid);
    return ConvexBody(std::move(grid), std::move(rho), std::move(h), d);
}

ConvexBody ConvexBody::polygon(GridPtr grid, std::vector<std::array<double, 2>> verts) {
    if (grid->n != 2) throw std::invalid_argument("polygon: requires a planar grid");
    PolygonDesc d{std::move(verts)};
    validate_polygon(d);
    auto rho = eval_desc_rho_on_grid(d, *grid);
    auto h = eval_desc_support_on_grid(d, *grid);
    return ConvexBody(std::move(grid), std::move(rho), std::move(h), std::move(d));
}

ConvexBody ConvexBody::from_support(GridPtr grid, std::vector<double> support,
                                    Descriptor desc) {
    if (support.size() != grid->size())
        throw std::invalid_argument("from_support: support values do not match the grid");
    std::vector<double> rho;
    if (!std::holds_alternative<std::monostate>(desc)) {
        rho = eval_desc_rho_on_grid(desc, *grid);
    } else if (grid->n == 2) {
        rho = radial_from_support(*grid, support);
    } else if (grid->n == 1) {
        rho = support;
    } else {
        throw std::invalid_argument("from_support: no radial recovery for n=3 without a descriptor");
    }
    return ConvexBody(std::move(grid), std::move(rho), std::move(support), std::move(desc));
}

double ConvexBody::rho_in_direction(const Vec3& u) const {
    if (auto v = desc_rho(desc_, u)) return *v;
    return interp_direction(*grid_, rho_, u);
}

double ConvexBody::support_in_direction(const Vec3& v) const {
    if (auto h = desc_support(desc_, v)) return *h;
    const double nv = norm3(v);
    if (!(nv > 0.0)) return 0.0;
    Vec3 u{v[0] / nv, v[1] / nv, v[2] / nv};
    return nv * interp_direction(*grid_, support_, u);
}

double gauge(const StarBody& K, const Vec3& x) {
    const double nx = norm3(x);
    if (nx == 0.0) return 0.0;
    const auto& d = K.descriptor();
    if (std::holds_alternative<BallDesc>(d)) return nx / std::get<BallDesc>(d).r;
    if (std::holds_alternative<BoxDesc>(d)) {
        const auto& b = std::get<BoxDesc>(d);
        double g = 0.0;
        for (int k = 0; k < 3; ++k) {
            // A face through the origin puts every point beyond it outside.
            if (x[k] > 0.0)
                g = std::max(g, b.hi[k] > 0.0 ? x[k] / b.hi[k] : kInf);
            else if (x[k] < 0.0)
                g = std::max(g, b.lo[k] < 0.0 ? x[k] / b.lo[k] : kInf);
        }
        return g;
    }
    if (std::holds_alternative<PolygonDesc>(d)) {
        double g = 0.0;
        for (const auto& e : polygon_edge_data(std::get<PolygonDesc>(d)))
            g = std::max(g, (e.nx * x[0] + e.ny * x[1]) / e.h);
        return g;
    }
    Vec3 u{x[0] / nx, x[1] / nx, x[2] / nx};
    const double rho = K.rho_in_direction(u);
    if (rho == 0.0) return kInf;
    return nx / rho;
}

double gauge(const ConvexBody& K, const Vec3& x) { return gauge(K.as_star(), x); }

StarBody scale(const StarBody& S, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scale: factor must be positive");
    std::vector<double> rho(S.rho());
    for (double& r : rho) r *= t;
    return StarBody(S.grid_ptr(), std::move(rho), scale_desc(S.descriptor(), t));
}

ConvexBody scale(const ConvexBody& K, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("scale: factor must be positive");
    std::vector<double> h(K.support());
    for (double& x : h) x *= t;
    return ConvexBody::from_support(K.grid_ptr(), std::move(h), scale_desc(K.descriptor(), t));
}

CoStar scale(const CoStar& C, double t) { return CoStar{scale(C.inner, t)}; }

ConvexBody minkowski_sum(const ConvexBody& A, const ConvexBody& B, double wa, double wb) {
    if (!(wa >= 0.0) || !(wb >= 0.0)) throw std::invalid_argument("minkowski_sum: negative weight");
    if (!same_grid(A.grid_ptr(), B.grid_ptr()))
        throw std::invalid_argument("minkowski_sum: bodies live on different grids");
    if (wa == 0.0 && wb == 0.0) throw std::invalid_argument("minkowski_sum: zero weights");
    if (wa == 0.0) return scale(B, wb);
    if (wb == 0.0) return scale(A, wa);

    const int n = A.grid().n;
    const std::size_t N = A.grid().size();
    std::vector<double> h(N);
    for (std::size_t i = 0; i < N; ++i) h[i] = wa * A.support(i) + wb * B.support(i);

    const auto& da = A.descriptor();
    const auto& db = B.descriptor();
    if (n == 1) {
        BoxDesc d;
        d.lo[0] = -h[1];
        d.hi[0] = h[0];
        return ConvexBody::from_support(A.grid_ptr(), std::move(h), d);
    }
    if (is_ball(da) && is_ball(db)) {
        return ConvexBody::from_support(
            A.grid_ptr(), std::move(h),
            BallDesc{wa * std::get<BallDesc>(da).r + wb * std::get<BallDesc>(db).r});
    }
    if (is_box(da) && is_box(db)) {
        BoxDesc d;
        const auto& ba = std::get<BoxDesc>(da);
        const auto& bb = std::get<BoxDesc>(db);
        for (int k = 0; k < 3; ++k) {
            d.lo[k] = wa * ba.lo[k] + wb * bb.lo[k];
            d.hi[k] = wa * ba.hi[k] + wb * bb.hi[k];
        }
        return ConvexBody::from_support(A.grid_ptr(), std::move(h), d);
    }
    if (n == 2 && is_polyish(da) && is_polyish(db)) {
        auto merged = poly_minkowski(as_polygon(da), as_polygon(db), wa, wb);
        return ConvexBody::from_support(A.grid_ptr(), std::move(h), std::move(merged));
    }
    if ((is_ball(da) && is_box(db)) || (is_box(da) && is_ball(db))) {
        const double s = is_ball(da) ? wa * std::get<BallDesc>(da).r
                                     : wb * std::get<BallDesc>(db).r;
        BoxDesc box = std::get<BoxDesc>(is_box(da) ? da : db);
        const double w = is_box(da) ? wa : wb;
        for (int k = 0; k < 3; ++k) {
            box.lo[k] *= w;
            box.hi[k] *= w;
        }
        std::vector<double> rho(N);
        for (std::size_t i = 0; i < N; ++i) rho[i] = rounded_box_rho(box, s, A.grid().dirs[i]);
        return ConvexBody(A.grid_ptr(), std::move(rho), std::move(h), std::monostate{});
    }
    if (n == 2) return ConvexBody::from_support(A.grid_ptr(), std::move(h), std::monostate{});
    throw std::invalid_argument("minkowski_sum: unsupported body pair for n=3");
}

StarBody radial_sum(const StarBody& A, const StarBody& B, double wa, double wb) {
    if (!(wa >= 0.0) || !(wb >= 0.0)) throw std::invalid_argument("radial_sum: negative weight");
    if (!same_grid(A.grid_ptr(), B.grid_ptr()))
        throw std::invalid_argument("radial_sum: bodies live on different grids");
    const std::size_t N = A.grid().size();
    std::vector<double> rho(N);
    for (std::size_t i = 0; i < N; ++i) rho[i] = wa * A.rho(i) + wb * B.rho(i);

    const auto& da = A.descriptor();
    const auto& db = B.descriptor();
    Descriptor d = std::monostate{};
    if (is_ball(da) && is_ball(db)) {
        d = BallDesc{wa * std::get<BallDesc>(da).r + wb * std::get<BallDesc>(db).r};
    } else if (std::holds_alternative<FourierDesc>(da) || std::holds_alternative<FourierDesc>(db)) {
        auto to_fourier = [](const Descriptor& x) -> std::optional<FourierDesc> {
            if (std::holds_alternative<FourierDesc>(x)) return std::get<FourierDesc>(x);
            if (std::holds_alternative<BallDesc>(x))
                return FourierDesc{std::get<BallDesc>(x).r, {}, {}};
            return std::nullopt;
        };
        auto fa = to_fourier(da);
        auto fb = to_fourier(db);
        if (fa && fb) {
            FourierDesc f;
            f.a0 = wa * fa->a0 + wb * fb->a0;
            const std::size_t nc = std::max(fa->cos_coef.size(), fb->cos_coef.size());
            const std::size_t ns = std::max(fa->sin_coef.size(), fb->sin_coef.size());
            f.cos_coef.assign(nc, 0.0);
            f.sin_coef.assign(ns, 0.0);
            for (std::size_t k = 0; k < nc; ++k)
                f.cos_coef[k] = wa * (k < fa->cos_coef.size() ? fa->cos_coef[k] : 0.0) +
                                wb * (k < fb->cos_coef.size() ? fb->cos_coef[k] : 0.0);
            for (std::size_t k = 0; k < ns; ++k)
                f.sin_coef[k] = wa * (k < fa->sin_coef.size() ? fa->sin_coef[k] : 0.0) +
                                wb * (k < fb->sin_coef.size() ? fb->sin_coef[k] : 0.0);
            d = std::move(f);
        }
    }
    return StarBody(A.grid_ptr(), std::move(rho), std::move(d));
}

std::optional<double> descriptor_volume(const Descriptor& d, int n) {
    if (std::holds_alternative<BallDesc>(d)) {
        const double r = std::get<BallDesc>(d).r;
        if (n == 1) return 2.0 * r;
        if (n == 2) return kPi * r * r;
        return 4.0 / 3.0 * kPi * r * r * r;
    }
    if (std::holds_alternative<BoxDesc>(d)) {
        const auto& b = std::get<BoxDesc>(d);
        double v = 1.0;
        for (int k = 0; k < n; ++k) v *= b.hi[k] - b.lo[k];
        return v;
    }
    if (std::holds_alternative<PolygonDesc>(d) && n == 2)
        return polygon_area(std::get<PolygonDesc>(d).verts);
    if (std::holds_alternative<FourierDesc>(d) && n == 2) {
        const auto& f = std::get<FourierDesc>(d);
        double v = kPi * f.a0 * f.a0;
        for (double c : f.cos_coef) v += 0.5 * kPi * c * c;
        for (double s : f.sin_coef) v += 0.5 * kPi * s * s;
        return v;
    }
    return std::nullopt;
}

std::optional<double> descriptor_perimeter(const Descriptor& d) {
    if (std::holds_alternative<BallDesc>(d)) return 2.0 * kPi * std::get<BallDesc>(d).r;
    if (std::holds_alternative<BoxDesc>(d)) {
        const auto& b = std::get<BoxDesc>(d);
        return 2.0 * ((b.hi[0] - b.lo[0]) + (b.hi[1] - b.lo[1]));
    }
    if (std::holds_alternative<PolygonDesc>(d)) {
        const auto& v = std::get<PolygonDesc>(d).verts;
        double p = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            p += std::hypot(b[0] - a[0], b[1] - a[1]);
        }
        return p;
    }
    return std::nullopt;
}

std::optional<double> minkowski_volume_closed_form(const ConvexBody& A, const ConvexBody& B,
                                                   double wa, double wb) {
    const int n = A.grid().n;
    if (wa == 0.0 || wb == 0.0) {
        const auto& K = (wa == 0.0) ? B : A;
        const double w = (wa == 0.0) ? wb : wa;
        if (auto v = descriptor_volume(K.descriptor(), n)) return std::pow(w, n) * (*v);
        return std::nullopt;
    }
    // Homothets: exact for any descriptor with a closed-form volume.
    {
        const auto& ha = A.support();
        const auto& hb = B.support();
        bool homothet = true;
        double c = 0.0;
        for (std::size_t i = 0; i < ha.size() && homothet; ++i) {
            if (ha[i] > 1e-300) {
                const double r = hb[i] / ha[i];
                if (c == 0.0)
                    c = r;
                else if (!(std::abs(r - c) <= 1e-12 * std::max(1.0, std::abs(c))))
                    homothet = false;
            } else if (std::abs(hb[i]) > 1e-12) {
                homothet = false;
            }
        }
        if (homothet && c > 0.0) {
            if (auto v = descriptor_volume(A.descriptor(), n))
                return std::pow(wa + wb * c, n) * (*v);
        }
    }
    const auto& da = A.descriptor();
    const auto& db = B.descriptor();
    if (n == 1) {
        return wa * (A.support(0) + A.support(1)) + wb * (B.support(0) + B.support(1));
    }
    if (is_ball(da) && is_ball(db)) {
        const double r = wa * std::get<BallDesc>(da).r + wb * std::get<BallDesc>(db).r;
        return descriptor_volume(BallDesc{r}, n);
    }
    if (is_box(da) && is_box(db)) {
        double v = 1.0;
        const auto& ba = std::get<BoxDesc>(da);
        const auto& bb = std::get<BoxDesc>(db);
        for (int k = 0; k < n; ++k)
            v *= wa * (ba.hi[k] - ba.lo[k]) + wb * (bb.hi[k] - bb.lo[k]);
        return v;
    }
    if (n == 2 && is_polyish(da) && is_polyish(db)) {
        auto merged = poly_minkowski(as_polygon(da), as_polygon(db), wa, wb);
        return polygon_area(merged.verts);
    }
    if ((is_ball(da) && is_polyish(db)) || (is_polyish(da) && is_ball(db))) {
        // Steiner: vol(P + s B^n) = vol(P) + s per(P) + pi s^2 for n=2.
        const double s = is_ball(da) ? wa * std::get<BallDesc>(da).r
                                     : wb * std::get<BallDesc>(db).r;
        const auto& dp = is_ball(da) ? db : da;
        const double w = is_ball(da) ? wb : wa;
        if (n == 2) {
            const double vol = *descriptor_volume(dp, 2) * w * w;
            const double per = *descriptor_perimeter(dp) * w;
            return vol + s * per + kPi * s * s;
        }
        if (n == 3 && is_box(dp)) {
            const auto& b = std::get<BoxDesc>(dp);
            const double w1 = w * (b.hi[0] - b.lo[0]);
            const double w2 = w * (b.hi[1] - b.lo[1]);
            const double w3 = w * (b.hi[2] - b.lo[2]);
            // box + s ball: slabs on the faces, quarter cylinders on the
            // edges, sphere octants at the corners.
            return w1 * w2 * w3 + 2.0 * s * (w1 * w2 + w1 * w3 + w2 * w3) +
                   kPi * s * s * (w1 + w2 + w3) + 4.0 / 3.0 * kPi * s * s * s;
        }
    }
    return std::nullopt;
}

std::vector<double> radial_from_support(const DirectionGrid& grid,
                                        const std::vector<double>& h) {
    if (grid.n != 2) throw std::invalid_argument("radial_from_support: planar grids only");
    const long N = long(grid.size());
    if (long(h.size()) != N)
        throw std::invalid_argument("radial_from_support: support values do not match the grid");
    const double dtheta = 2.0 * kPi / double(N);
    auto val = [&](long i, long j) {
        double diff = double(j - i) * dtheta;
        const double c = std::cos(diff);
        if (c <= 1e-9) return kInf;
        long jw = ((j % N) + N) % N;
        return h[std::size_t(jw)] / c;
    };
    std::vector<double> rho(static_cast<std::size_t>(N));
    long j = 0;
    {
        double best = val(0, 0);
        for (long o = -N / 4; o <= N / 4; ++o) {
            const double v = val(0, o);
            if (v < best) {
                best = v;
                j = o;
            }
        }
    }
    // The touching-line index is nondecreasing in i for convex supports, so a
    // strictly improving forward walk finds each minimum in O(N) total.
    for (long i = 0; i < N; ++i) {
        long guard = 0;
        while (guard++ < N && val(i, j + 1) < val(i, j)) ++j;
        rho[std::size_t(i)] = val(i, j);
    }
    return rho;
}

double star_support_in_direction(const StarBody& S, const Vec3& v) {
    if (auto h = desc_support(S.descriptor(), v)) return *h;
    const auto& g = S.grid();
    double best = 0.0; // the origin belongs to every star body
    for (std::size_t i = 0; i < g.size(); ++i) {
        best = std::max(best, S.rho(i) * dot3(g.dirs[i], v));
    }
    return best;
}

std::vector<double> star_hull_support(const StarBody& S) {
    const auto& g = S.grid();
    const std::size_t N = g.size();
    std::vector<double> h(N);
    if (g.n == 2) {
        // Positive dot products only occur within a quarter turn.
        const long W = long(N) / 4 + 1;
        for (long i = 0; i < long(N); ++i) {
            double best = 0.0;
            for (long o = -W; o <= W; ++o) {
                const long j = ((i + o) % long(N) + long(N)) % long(N);
                best = std::max(best, S.rho(std::size_t(j)) *
                                          dot3(g.dirs[std::size_t(j)], g.dirs[std::size_t(i)]));
            }
            h[std::size_t(i)] = best;
        }
        return h;
    }
    for (std::size_t i = 0; i < N; ++i) h[i] = star_support_in_direction(S, g.dirs[i]);
    return h;
}

double convexity_deficit_area(const StarBody& S) {
    if (S.grid().n != 2)
        throw std::invalid_argument("convexity_deficit_area: planar bodies only");
    const auto& g = S.grid();
    const std::size_t N = g.size();
    std::vector<std::array<double, 2>> pts(N);
    for (std::size_t i = 0; i < N; ++i)
        pts[i] = {S.rho(i) * g.dirs[i][0], S.rho(i) * g.dirs[i][1]};
    const double body = polygon_area(pts);

    // Andrew monotone chain on the boundary points.
    std::vector<std::array<double, 2>> p = pts;
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return 0.0;
    auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                    const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> hull(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
        hull[k++] = p[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    const double hull_area = polygon_area(hull);
    return std::max(0.0, hull_area - body);
}

std::vector<double> translate_support(const ConvexBody& K, const Vec3& b) {
    const auto& g = K.grid();
    std::vector<double> h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = K.support(i) + dot3(b, g.dirs[i]);
    return h;
}

std::optional<PolygonDesc> descriptor_as_polygon(const Descriptor& d) {
    if (std::holds_alternative<PolygonDesc>(d)) return std::get<PolygonDesc>(d);
    if (std::holds_alternative<BoxDesc>(d)) return box_as_polygon(std::get<BoxDesc>(d));
    return std::nullopt;
}

} // namespace geomineq
