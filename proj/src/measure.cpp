#include "geomineq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "geomineq/kernels.hpp"

namespace geomineq {

namespace {

void require_same_grid(const DisintegratedMeasure& mu, const GridPtr& g, const char* who) {
    if (!same_grid(mu.grid, g)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
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

/// Constant per-direction density w0 = eta / (sigma rho_B^n), or nullopt.
std::optional<double> uniform_w0(const DisintegratedMeasure& mu) {
    const auto& g = *mu.grid;
    double w = -1.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rb = mu.rho_B[i];
        const double den = g.weights[i] * std::pow(rb, g.n);
        if (!(den > 0.0)) return std::nullopt;
        const double wi = mu.eta[i] / den;
        if (w < 0.0)
            w = wi;
        else if (!(std::abs(wi - w) <= 1e-9 * std::max(1.0, w)))
            return std::nullopt;
    }
    return w;
}

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGLx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                            0.9602898564975362};
constexpr double kGLw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                            0.1012285362903763};

double gl8(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        s += kGLw[k] * (f(mid + half * kGLx[k]) + f(mid - half * kGLx[k]));
    }
    return s * half;
}

ExtNonneg boundary_impl(const DisintegratedMeasure& mu, const StarBody& S,
                        const ConvexBody& K, BoundarySide side, BoundaryMode mode);

} // namespace

DisintegratedMeasure homogeneous_measure(const std::vector<double>& w0, const Exponent& p,
                                         GridPtr grid) {
    if (!grid) throw std::invalid_argument("homogeneous_measure: null grid");
    const int n = grid->n;
    if (p.is_zero() || p.is_neg_inf())
        throw std::invalid_argument("homogeneous_measure: p must lie in (-1/n, 0) or (0, inf]");
    if (p.is_finite() && p.value() < 0.0 && p.value() <= -1.0 / double(n))
        throw std::invalid_argument("homogeneous_measure: p must lie in (-1/n, 0) or (0, inf]");
    if (w0.size() != grid->size())
        throw std::invalid_argument("homogeneous_measure: w0 does not match the grid");

    const Exponent q = dual_exponent(p, n);
    const double qv = q.value(); // finite and nonzero on the admissible range

    DisintegratedMeasure mu;
    mu.grid = std::move(grid);
    mu.eta.resize(w0.size());
    bool any = false;
    for (std::size_t i = 0; i < w0.size(); ++i) {
        if (!(w0[i] >= 0.0) || !std::isfinite(w0[i]))
            throw std::invalid_argument("homogeneous_measure: w0 must be finite and >= 0");
        mu.eta[i] = w0[i] * mu.grid->weights[i];
        any = any || mu.eta[i] > 0.0;
    }
    if (!any) throw std::invalid_argument("homogeneous_measure: all-zero w0");
    mu.c_eta = kernels::sum(mu.eta.data(), mu.eta.size());
    mu.law = power_law(1.0 - 1.0 / qv); // phi(r) = r^{1/q - 1}
    mu.law_hat = scaled_law(mu.c_eta, mu.law);
    mu.rho_B.assign(mu.eta.size(), 1.0);
    mu.q_hom = qv;
    return mu;
}

DisintegratedMeasure warped_measure(const std::vector<double>& w0, const StarBody& B,
                                    LawPtr law) {
    if (!law) throw std::invalid_argument("warped_measure: null law");
    validate_law_shape(*law);
    const auto& g = B.grid();
    if (w0.size() != g.size())
        throw std::invalid_argument("warped_measure: w0 does not match the grid");

    DisintegratedMeasure mu;
    mu.grid = B.grid_ptr();
    mu.eta.resize(g.size());
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(w0[i] >= 0.0) || !std::isfinite(w0[i]))
            throw std::invalid_argument("warped_measure: w0 must be finite and >= 0");
        mu.eta[i] = w0[i] * std::pow(B.rho(i), g.n) * g.weights[i];
        if (!std::isfinite(mu.eta[i]))
            throw std::invalid_argument("warped_measure: infinite angular mass");
        any = any || mu.eta[i] > 0.0;
    }
    if (!any) throw std::invalid_argument("warped_measure: zero angular mass");
    mu.c_eta = kernels::sum(mu.eta.data(), mu.eta.size());
    mu.law = std::move(law);
    mu.law_hat = scaled_law(mu.c_eta, mu.law);
    mu.rho_B = B.rho();
    return mu;
}

ExtNonneg measure_of_star(const DisintegratedMeasure& mu, const StarBody& A) {
    require_same_grid(mu, A.grid_ptr(), "measure_of_star");
    if (mu.law->traits().origin_nonintegrable) {
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (mu.eta[i] > 0.0 && A.rho(i) > 0.0) return kInf;
        }
        return 0.0;
    }
    std::vector<double> terms(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.eta[i] <= 0.0 || A.rho(i) <= 0.0) continue;
        terms[i] = mu.eta[i] * double(mu.law->integral(0.0, A.rho(i) / mu.rho_B[i]));
    }
    return kernels::sum(terms.data(), terms.size());
}

ExtNonneg measure_of_costar(const DisintegratedMeasure& mu, const CoStar& C) {
    require_same_grid(mu, C.inner.grid_ptr(), "measure_of_costar");
    std::vector<double> terms(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.eta[i] <= 0.0) continue;
        terms[i] = ext_mul(mu.eta[i], mu.law->Phi(C.inner.rho(i) / mu.rho_B[i]));
    }
    return kernels::sum(terms.data(), terms.size());
}

ExtNonneg measure_of_shell(const DisintegratedMeasure& mu, const StarBody& lo,
                           const StarBody& hi) {
    require_same_grid(mu, lo.grid_ptr(), "measure_of_shell");
    require_same_grid(mu, hi.grid_ptr(), "measure_of_shell");
    std::vector<double> terms(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.eta[i] <= 0.0) continue;
        const double a = lo.rho(i) / mu.rho_B[i];
        double b = hi.rho(i) / mu.rho_B[i];
        if (b < a) {
            if (b < a * (1.0 - 1e-9) - 1e-300)
                throw std::invalid_argument("measure_of_shell: bodies are not nested");
            b = a;
        }
        terms[i] = ext_mul(mu.eta[i], mu.law->integral(a, b));
    }
    return kernels::sum(terms.data(), terms.size());
}

namespace {

ExtNonneg boundary_homothet(const DisintegratedMeasure& mu, double t, const ConvexBody& K) {
    if (t == 0.0) return 0.0;
    std::vector<double> terms(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double rk = K.rho(i);
        if (mu.eta[i] <= 0.0 || rk <= 0.0) continue;
        const double rb = mu.rho_B[i];
        terms[i] = ext_mul(mu.eta[i], ext_mul(mu.law->phi(t * rk / rb), rk / rb));
    }
    return kernels::sum(terms.data(), terms.size());
}

ExtNonneg boundary_radial_shell(const DisintegratedMeasure& mu, const StarBody& S,
                                const ConvexBody& K) {
    if (mu.n() != 2)
        throw std::invalid_argument("boundary_measure: radial shell mode is planar only");
    const auto& g = *mu.grid;
    std::vector<double> terms(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.eta[i] <= 0.0) continue;
        const double rho = S.rho(i);
        if (rho <= 0.0) continue;
        const double theta = g.angles[i];
        const double rp = S.rho_prime_at_angle(theta);
        const double c = g.dirs[i][0], s = g.dirs[i][1];
        // Unnormalized outward normal rho e_r - rho' e_theta; h_K is
        // positively homogeneous, so no normalization is needed.
        const Vec3 nu{rho * c + rp * s, rho * s - rp * c, 0.0};
        const double h = K.support_in_direction(nu);
        const double rb = mu.rho_B[i];
        terms[i] = ext_mul(mu.eta[i], ext_mul(mu.law->phi(rho / rb) / rb, h / rho));
    }
    return kernels::sum(terms.data(), terms.size());
}

ExtNonneg boundary_polygon_edge(const DisintegratedMeasure& mu, const StarBody& S,
                                const ConvexBody& K) {
    if (mu.n() != 2)
        throw std::invalid_argument("boundary_measure: polygon edge mode is planar only");
    const auto poly = descriptor_as_polygon(S.descriptor());
    if (!poly)
        throw std::invalid_argument("boundary_measure: polygon edge mode needs a polygonal body");
    const auto w0 = uniform_w0(mu);
    if (!w0)
        throw std::invalid_argument(
            "boundary_measure: polygon edge mode requires a constant angular density");

    const auto& g = *mu.grid;
    const bool ball_B =
        std::all_of(mu.rho_B.begin(), mu.rho_B.end(),
                    [&](double r) { return std::abs(r - mu.rho_B[0]) <= 1e-15 * mu.rho_B[0]; });
    auto gauge_B = [&](double x, double y) {
        const double r = std::hypot(x, y);
        if (r == 0.0) return 0.0;
        if (ball_B) return r / mu.rho_B[0];
        return r / grid_lerp(g, mu.rho_B, std::atan2(y, x));
    };
    const bool origin_divergent = mu.law->traits().origin_nonintegrable;

    const auto& verts = poly->verts;
    const std::size_t m = verts.size();
    double total = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
        const auto& a = verts[e];
        const auto& b = verts[(e + 1) % m];
        const double dx = b[0] - a[0], dy = b[1] - a[1];
        const double len = std::hypot(dx, dy);
        const Vec3 nu{dy / len, -dx / len, 0.0};
        const double h = K.support_in_direction(nu);
        auto density = [&](double u) {
            const double x = a[0] + u * dx, y = a[1] + u * dy;
            const double gg = gauge_B(x, y);
            return *w0 * mu.law->phi(gg) / gg * len; // n = 2: w0 phi(g) g^{1-n} |dl/du|
        };
        // Distance from the origin to the edge segment; refine toward a
        // touching point, where the integrand may blow up.
        const double tproj = std::clamp(-(a[0] * dx + a[1] * dy) / (len * len), 0.0, 1.0);
        const double dmin = std::hypot(a[0] + tproj * dx, a[1] + tproj * dy);
        double edge_int = 0.0;
        if (dmin < 1e-12 * std::max(1.0, len)) {
            if (origin_divergent) return kInf;
            // Geometric refinement on both sides of the touching point.
            for (int dir = 0; dir < 2; ++dir) {
                const double span = dir == 0 ? tproj : 1.0 - tproj;
                if (span <= 0.0) continue;
                double prev_piece = kInf;
                for (int k = 0; k < 80; ++k) {
                    const double u1 = span * std::pow(0.5, k);
                    const double u0 = span * std::pow(0.5, k + 1);
                    auto f = [&](double u) {
                        return density(dir == 0 ? tproj - u : tproj + u);
                    };
                    const double piece = gl8(f, u0, u1);
                    edge_int += piece;
                    if (!(piece < kInf)) return kInf;
                    if (k > 40 && piece > 0.9 * prev_piece && piece > 1e-6 * edge_int)
                        return kInf; // non-decaying pieces: divergent edge
                    prev_piece = piece;
                    if (piece < 1e-15 * std::max(edge_int, 1e-300) && k > 8) break;
                }
            }
        } else {
            const int pieces = 64;
            for (int k = 0; k < pieces; ++k)
                edge_int += gl8(density, double(k) / pieces, double(k + 1) / pieces);
        }
        total += h * edge_int;
    }
    return total;
}

ExtNonneg boundary_impl(const DisintegratedMeasure& mu, const StarBody& S,
                        const ConvexBody& K, BoundarySide side, BoundaryMode mode) {
    (void)side; // the first-order shell value is side-independent for regular bodies
    require_same_grid(mu, S.grid_ptr(), "boundary_measure");
    require_same_grid(mu, K.grid_ptr(), "boundary_measure");
    if (mode == BoundaryMode::auto_detect) {
        if (auto t = homothety_ratio(S.rho(), K.rho())) return boundary_homothet(mu, *t, K);
        if (mu.n() == 2) {
            if (descriptor_as_polygon(S.descriptor()) && uniform_w0(mu))
                return boundary_polygon_edge(mu, S, K);
            return boundary_radial_shell(mu, S, K);
        }
        throw std::invalid_argument(
            "boundary_measure: no exact mode applies (use the voxel oracle)");
    }
    switch (mode) {
        case BoundaryMode::homothet_exact: {
            auto t = homothety_ratio(S.rho(), K.rho());
            if (!t)
                throw std::invalid_argument("boundary_measure: body is not a homothet of K");
            return boundary_homothet(mu, *t, K);
        }
        case BoundaryMode::polygon_edge:
            return boundary_polygon_edge(mu, S, K);
        case BoundaryMode::radial_shell:
            return boundary_radial_shell(mu, S, K);
        default:
            throw std::logic_error("boundary_measure: unknown mode");
    }
}

} // namespace

ExtNonneg boundary_measure(const DisintegratedMeasure& mu, const CoStar& C,
                           const ConvexBody& K, BoundarySide side, BoundaryMode mode) {
    return boundary_impl(mu, C.inner, K, side, mode);
}

ExtNonneg boundary_measure(const DisintegratedMeasure& mu, const StarBody& A,
                           const ConvexBody& K, BoundarySide side, BoundaryMode mode) {
    return boundary_impl(mu, A, K, side, mode);
}

namespace {

StarBody random_star(const GridPtr& grid, Rng& rng) {
    const int n = grid->n;
    if (n == 2) {
        FourierDesc f;
        f.a0 = 0.8 + 1.2 * rng.uniform01();
        f.cos_coef = {0.1 * f.a0 * (2.0 * rng.uniform01() - 1.0),
                      0.08 * f.a0 * (2.0 * rng.uniform01() - 1.0)};
        f.sin_coef = {0.1 * f.a0 * (2.0 * rng.uniform01() - 1.0),
                      0.08 * f.a0 * (2.0 * rng.uniform01() - 1.0)};
        return StarBody::fourier(grid, f);
    }
    const double a0 = 0.8 + 1.2 * rng.uniform01();
    Vec3 v{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0,
           n == 3 ? 2.0 * rng.uniform01() - 1.0 : 0.0};
    const double nv = std::max(1e-9, norm3(v));
    v = {v[0] / nv, v[1] / nv, v[2] / nv};
    std::vector<double> rho(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i)
        rho[i] = a0 * (1.0 + 0.3 * dot3(grid->dirs[i], v));
    return StarBody(grid, std::move(rho));
}

} // namespace

IneqReport check_homogeneity(const std::function<ExtNonneg(const StarBody&)>& mass,
                             double q, int trials, const GridPtr& grid, std::uint64_t seed) {
    if (!(q != 0.0) || !std::isfinite(q))
        throw std::invalid_argument("check_homogeneity: q must be finite and nonzero");
    Rng rng(seed);
    const double lambdas[] = {0.5, 2.0, 3.0};
    double worst = 0.0;
    std::string witness;
    for (int t = 0; t < trials; ++t) {
        const StarBody A = random_star(grid, rng);
        const double m0 = mass(A);
        if (!std::isfinite(m0) || m0 <= 0.0) {
            return make_report("check_homogeneity", kInf, 1e-9, Orientation::LE, 0.0,
                               CheckMode::assert_mode, "closed_form",
                               "non-finite base mass at trial " + std::to_string(t));
        }
        for (double lam : lambdas) {
            const double m1 = mass(scale(A, lam));
            const double lhs = std::pow(m1, q);
            const double rhs = lam * std::pow(m0, q);
            const double defect = std::abs(lhs - rhs) / std::abs(rhs);
            if (defect > worst) {
                worst = defect;
                witness = "trial " + std::to_string(t) + ", lambda=" + fmt_double(lam);
            }
        }
    }
    return make_report("check_homogeneity", worst, 1e-9, Orientation::LE, 0.0,
                       CheckMode::assert_mode, "closed_form", witness,
                       "max relative defect of mu(lambda A)^q = lambda mu(A)^q over " +
                           std::to_string(trials) + " trials");
}

IneqReport check_homogeneity(const DisintegratedMeasure& mu, double q, int trials,
                             std::uint64_t seed) {
    const bool costars = mu.law->traits().origin_nonintegrable;
    auto mass = [&](const StarBody& A) -> ExtNonneg {
        if (costars) return measure_of_costar(mu, CoStar{A});
        return measure_of_star(mu, A);
    };
    return check_homogeneity(mass, q, trials, mu.grid, seed);
}

double eta_from_slab(const DisintegratedMeasure& mu, const std::vector<std::uint8_t>& mask) {
    if (!mu.q_hom)
        throw std::invalid_argument("eta_from_slab: homogeneous measure required");
    if (mask.size() != mu.size())
        throw std::invalid_argument("eta_from_slab: mask does not match the grid");
    const double q = *mu.q_hom;
    std::vector<double> lo(mu.size(), 0.0), hi(mu.size(), 0.0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) {
            lo[i] = 1.0;
            hi[i] = 2.0;
        }
    }
    const double slab =
        measure_of_shell(mu, StarBody(mu.grid, std::move(lo)), StarBody(mu.grid, std::move(hi)));
    return slab / (q * (std::pow(2.0, 1.0 / q) - 1.0));
}

std::vector<double> w0_constant(const DirectionGrid& grid, double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("w0_constant: negative value");
    return std::vector<double>(grid.size(), value);
}

std::vector<double> w0_arc(const DirectionGrid& grid, double theta_lo, double theta_hi) {
    if (grid.n != 2) throw std::invalid_argument("w0_arc: planar grids only");
    if (!(theta_hi >= theta_lo) || theta_hi - theta_lo > 2.0 * kPi + 1e-12)
        throw std::invalid_argument("w0_arc: need theta_lo <= theta_hi <= theta_lo + 2pi");
    const std::size_t N = grid.size();
    const double d = 2.0 * kPi / double(N);
    double lo = theta_lo - std::floor(theta_lo / (2.0 * kPi)) * 2.0 * kPi;
    const double hi = lo + (theta_hi - theta_lo);
    std::vector<double> w(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double a = grid.angles[i] - 0.5 * d;
        const double b = grid.angles[i] + 0.5 * d;
        double cover = 0.0;
        for (int s = -1; s <= 1; ++s) {
            const double sl = lo + 2.0 * kPi * s, sh = hi + 2.0 * kPi * s;
            cover += std::max(0.0, std::min(b, sh) - std::max(a, sl));
        }
        w[i] = std::min(cover, d) / d;
    }
    return w;
}

std::vector<double> w0_cone(const DirectionGrid& grid, double half_angle, const Vec3& axis) {
    if (!(half_angle >= 0.0) || half_angle > kPi + 1e-12)
        throw std::invalid_argument("w0_cone: half angle must lie in [0, pi]");
    const double na = norm3(axis);
    if (!(na > 0.0)) throw std::invalid_argument("w0_cone: zero axis");
    if (grid.n == 2) {
        const double beta = std::atan2(axis[1], axis[0]);
        return w0_arc(grid, beta - half_angle, beta + half_angle);
    }
    std::vector<double> w(grid.size(), 0.0);
    const double c = std::cos(half_angle);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (dot3(grid.dirs[i], axis) / na >= c - 1e-15) w[i] = 1.0;
    }
    return w;
}

} // namespace geomineq
