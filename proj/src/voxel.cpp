#include "geomineq/voxel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "geomineq/kernels.hpp"

namespace geomineq {

namespace {

std::uint64_t tail_mask(std::size_t m) {
    const std::size_t valid = m - 64 * ((m - 1) / 64);
    return valid == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << valid) - 1);
}

void clear_pad_bits(VoxelSet& v) {
    const std::uint64_t tm = tail_mask(v.m);
    for (std::size_t iy = 0; iy < v.m; ++iy) v.words[iy * v.wpr + v.wpr - 1] &= tm;
}

void require_same_window(const VoxelSet& a, const VoxelSet& b) {
    if (!a.same_window(b)) throw std::invalid_argument("voxel: window mismatch");
}

// A maximal horizontal run of occupied cells.
struct Run {
    std::size_t iy, x0, len;
};

std::vector<Run> extract_runs(const VoxelSet& v) {
    std::vector<Run> runs;
    for (std::size_t iy = 0; iy < v.m; ++iy) {
        const std::uint64_t* row = v.words.data() + iy * v.wpr;
        std::size_t ix = 0;
        while (ix < v.m) {
            std::size_t wi = ix / 64, bi = ix % 64;
            std::uint64_t w = row[wi] >> bi;
            if (w == 0) { // skip to the next word boundary
                ix = (wi + 1) * 64;
                continue;
            }
            ix += static_cast<std::size_t>(std::countr_zero(w));
            const std::size_t start = ix;
            while (ix < v.m) { // walk the run of ones
                wi = ix / 64;
                bi = ix % 64;
                std::uint64_t ones = ~(row[wi] >> bi);
                if (ones == 0) {
                    ix = (wi + 1) * 64;
                    continue;
                }
                ix += static_cast<std::size_t>(std::countr_zero(ones));
                break;
            }
            if (ix > v.m) ix = v.m;
            runs.push_back({iy, start, ix - start});
        }
    }
    return runs;
}

// dst |= src >> bits, where src has src_w words and dst dst_w; source bit
// pos lands at pos - bits. Bits below zero are dropped (caller pre-checks).
void or_shift_down_row(std::uint64_t* dst, std::size_t dst_w, const std::uint64_t* src,
                       std::size_t src_w, std::size_t bits) {
    const std::size_t ws = bits / 64, bs = bits % 64;
    for (std::size_t i = 0; i < dst_w; ++i) {
        const std::size_t j = i + ws;
        std::uint64_t v = 0;
        if (j < src_w) v = src[j] >> bs;
        if (bs != 0 && j + 1 < src_w) v |= src[j + 1] << (64 - bs);
        dst[i] |= v;
    }
}

// dst |= src << bits with independent widths; overflowing bits are dropped
// (caller pre-checks for escapes).
void or_shift_up_row(std::uint64_t* dst, std::size_t dst_w, const std::uint64_t* src,
                     std::size_t src_w, std::size_t bits) {
    const std::size_t ws = bits / 64, bs = bits % 64;
    for (std::size_t i = ws; i < dst_w; ++i) {
        const std::size_t j = i - ws;
        std::uint64_t v = 0;
        if (j < src_w) v = src[j] << bs;
        if (bs != 0 && j >= 1 && j - 1 < src_w) v |= src[j - 1] >> (64 - bs);
        dst[i] |= v;
    }
}

bool row_any_in_bit_range(const std::uint64_t* row, std::size_t nwords, long lo, long hi) {
    if (hi <= lo) return false;
    const long last = static_cast<long>(nwords) * 64;
    lo = std::max(lo, 0L);
    hi = std::min(hi, last);
    for (long b = lo; b < hi;) {
        const std::size_t wi = static_cast<std::size_t>(b) / 64, bi = static_cast<std::size_t>(b) % 64;
        std::uint64_t w = row[wi] >> bi;
        const long span = std::min<long>(64 - static_cast<long>(bi), hi - b);
        if (span < 64) w &= (span == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << span) - 1));
        if (w != 0) return true;
        b += span;
    }
    return false;
}

double min_abs_window(const VoxelSet& v) { return std::min(-v.lo, v.hi()); }

} // namespace

std::uint64_t VoxelSet::count() const {
    return kernels::popcount(words.data(), words.size());
}

bool VoxelSet::same_window(const VoxelSet& o) const {
    return m == o.m && std::abs(lo - o.lo) <= 1e-12 * std::max(1.0, std::abs(lo)) &&
           std::abs(h - o.h) <= 1e-15 * h;
}

VoxelSet make_window(double lo, double hi, double h) {
    if (!(h > 0.0) || !(hi > lo)) throw std::invalid_argument("make_window: bad geometry");
    const double steps = (hi - lo) / h;
    const double loh = lo / h;
    if (std::abs(steps - std::round(steps)) > 1e-9 || std::abs(loh - std::round(loh)) > 1e-9)
        throw std::invalid_argument("make_window: lo/h and (hi-lo)/h must be integers");
    VoxelSet v;
    v.lo = lo;
    v.h = h;
    v.m = static_cast<std::size_t>(std::llround(steps)) + 1;
    v.wpr = (v.m + 63) / 64;
    v.words.assign(v.m * v.wpr, 0);
    return v;
}

VoxelSet voxelize(const StarBody& S, double lo, double hi, double h, VoxelFill fill) {
    if (S.grid().n != 2) throw std::invalid_argument("voxelize: n = 2 only");
    VoxelSet v = make_window(lo, hi, h);
    const double pad = fill == VoxelFill::outer ? 1.5 * h : 0.0;
    double rmax = 0.0;
    for (double r : S.rho()) rmax = std::max(rmax, r);
    if (rmax + pad + h > min_abs_window(v))
        throw std::invalid_argument("voxelize: body does not fit in the window");
    for (std::size_t iy = 0; iy < v.m; ++iy) {
        const double y = v.cy(iy);
        std::uint64_t* row = v.words.data() + iy * v.wpr;
        for (std::size_t ix = 0; ix < v.m; ++ix) {
            const double x = v.cx(ix);
            const double r = std::hypot(x, y);
            bool in;
            if (pad == 0.0) {
                in = gauge(S, {x, y, 0.0}) <= 1.0;
            } else if (r <= pad) {
                in = true;
            } else {
                const double g = gauge(S, {x, y, 0.0});
                in = g < kInf && r <= r / g + pad;
            }
            if (in) row[ix / 64] |= std::uint64_t(1) << (ix % 64);
        }
    }
    return v;
}

VoxelSet voxelize(const ConvexBody& K, double lo, double hi, double h, VoxelFill fill) {
    return voxelize(K.as_star(), lo, hi, h, fill);
}

VoxelSet voxelize(const CoStar& C, double lo, double hi, double h, VoxelFill fill) {
    return voxel_not(voxelize(C.inner, lo, hi, h, fill));
}

VoxelSet voxel_not(const VoxelSet& a) {
    VoxelSet r = a;
    for (auto& w : r.words) w = ~w;
    clear_pad_bits(r);
    return r;
}

VoxelSet voxel_and(const VoxelSet& a, const VoxelSet& b) {
    require_same_window(a, b);
    VoxelSet r = a;
    for (std::size_t i = 0; i < r.words.size(); ++i) r.words[i] &= b.words[i];
    return r;
}

VoxelSet voxel_or(const VoxelSet& a, const VoxelSet& b) {
    require_same_window(a, b);
    VoxelSet r = a;
    kernels::or_words(r.words.data(), b.words.data(), r.words.size());
    return r;
}

VoxelSet voxel_and_not(const VoxelSet& a, const VoxelSet& b) {
    require_same_window(a, b);
    VoxelSet r = a;
    for (std::size_t i = 0; i < r.words.size(); ++i) r.words[i] &= ~b.words[i];
    return r;
}

VoxelSet voxel_reflect(const VoxelSet& a) {
    if (std::abs(a.lo + a.hi()) > 1e-9 * a.h)
        throw std::invalid_argument("voxel_reflect: window must be symmetric");
    VoxelSet r = make_window(a.lo, a.hi(), a.h);
    for (std::size_t iy = 0; iy < a.m; ++iy)
        for (std::size_t ix = 0; ix < a.m; ++ix)
            if (a.bit(ix, iy)) r.set_bit(a.m - 1 - ix, a.m - 1 - iy);
    return r;
}

VoxelSet voxel_scale(const VoxelSet& a, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("voxel_scale: t > 0 required");
    VoxelSet r = make_window(a.lo, a.hi(), a.h);
    // Escape check on the occupied bounding box.
    std::size_t x0 = a.m, x1 = 0, y0 = a.m, y1 = 0;
    bool any = false;
    for (const Run& run : extract_runs(a)) {
        any = true;
        x0 = std::min(x0, run.x0);
        x1 = std::max(x1, run.x0 + run.len - 1);
        y0 = std::min(y0, run.iy);
        y1 = std::max(y1, run.iy);
    }
    if (!any) return r;
    const double half = a.h / 2;
    for (double c : {a.cx(x0) * t, a.cx(x1) * t, a.cy(y0) * t, a.cy(y1) * t})
        if (c < a.lo - half || c > a.hi() + half)
            throw std::invalid_argument("voxel_scale: scaled set escapes the window");
    for (std::size_t iy = 0; iy < r.m; ++iy) {
        const double sy = (r.cy(iy) / t - a.lo) / a.h;
        const long jy = std::lround(sy);
        if (jy < 0 || jy >= static_cast<long>(a.m)) continue;
        std::uint64_t* row = r.words.data() + iy * r.wpr;
        const std::uint64_t* srow = a.words.data() + static_cast<std::size_t>(jy) * a.wpr;
        for (std::size_t ix = 0; ix < r.m; ++ix) {
            const double sx = (r.cx(ix) / t - a.lo) / a.h;
            const long jx = std::lround(sx);
            if (jx < 0 || jx >= static_cast<long>(a.m)) continue;
            if ((srow[static_cast<std::size_t>(jx) / 64] >> (static_cast<std::size_t>(jx) % 64)) & 1u)
                row[ix / 64] |= std::uint64_t(1) << (ix % 64);
        }
    }
    return r;
}

VoxelSet voxel_minkowski(const VoxelSet& a, const VoxelSet& b, double wa, double wb, bool clip) {
    require_same_window(a, b);
    if (wa < 0.0 || wb < 0.0) throw std::invalid_argument("voxel_minkowski: weights >= 0");
    if (wa == 0.0 && wb == 0.0) {
        VoxelSet r = make_window(a.lo, a.hi(), a.h);
        const long i0 = std::lround(-a.lo / a.h);
        r.set_bit(static_cast<std::size_t>(i0), static_cast<std::size_t>(i0));
        return r;
    }
    if (wa == 0.0) return wb == 1.0 ? b : voxel_scale(b, wb);
    if (wb == 0.0) return wa == 1.0 ? a : voxel_scale(a, wa);
    VoxelSet As, Bs;
    if (wa != 1.0) As = voxel_scale(a, wa);
    if (wb != 1.0) Bs = voxel_scale(b, wb);
    const VoxelSet& av = wa == 1.0 ? a : As;
    const VoxelSet& bv = wb == 1.0 ? b : Bs;

    VoxelSet r = make_window(a.lo, a.hi(), a.h);
    std::vector<Run> runs = extract_runs(bv);
    if (runs.empty()) return r;
    std::vector<std::uint8_t> row_nonempty(av.m, 0);
    bool a_any = false;
    for (std::size_t iy = 0; iy < av.m; ++iy) {
        const std::uint64_t* row = av.words.data() + iy * av.wpr;
        for (std::size_t k = 0; k < av.wpr; ++k)
            if (row[k] != 0) {
                row_nonempty[iy] = 1;
                a_any = true;
                break;
            }
    }
    if (!a_any) return r;

    std::sort(runs.begin(), runs.end(), [](const Run& p, const Run& q) {
        if (p.len != q.len) return p.len < q.len;
        if (p.iy != q.iy) return p.iy < q.iy;
        return p.x0 < q.x0;
    });
    const std::size_t maxlen = runs.back().len;
    const long off = std::lround(a.lo / a.h);
    const std::size_t m = a.m;

    // Work buffer: A smeared rightward by [0, covered) cells, wide enough
    // that no intermediate bit is lost.
    const std::size_t wpr_w = (m + maxlen + 63) / 64;
    std::vector<std::uint64_t> work(m * wpr_w, 0), tmp;
    for (std::size_t iy = 0; iy < m; ++iy)
        std::copy_n(av.words.data() + iy * av.wpr, av.wpr, work.data() + iy * wpr_w);
    std::size_t covered = 1;

    for (const Run& run : runs) {
        while (covered < run.len) { // extend the smear to exactly run.len
            const std::size_t s = std::min(covered, run.len - covered);
            tmp = work;
            for (std::size_t iy = 0; iy < m; ++iy) {
                if (!row_nonempty[iy]) continue;
                kernels::or_shifted_bits(work.data() + iy * wpr_w, tmp.data() + iy * wpr_w,
                                         wpr_w, s);
            }
            covered += s;
        }
        const long dy = static_cast<long>(run.iy) + off;
        const long base = static_cast<long>(run.x0) + off;
        for (std::size_t ja = 0; ja < m; ++ja) {
            if (!row_nonempty[ja]) continue;
            const std::uint64_t* wrow = work.data() + ja * wpr_w;
            const long jt = static_cast<long>(ja) + dy;
            if (jt < 0 || jt >= static_cast<long>(m)) {
                if (!clip && row_any_in_bit_range(wrow, wpr_w, 0,
                                                  static_cast<long>(m + run.len)))
                    throw std::invalid_argument("voxel_minkowski: sum escapes the window");
                continue;
            }
            // Source bit pos lands at pos + base; positions outside [0, m) escape.
            if (!clip) {
                if (row_any_in_bit_range(wrow, wpr_w, 0, -base) ||
                    row_any_in_bit_range(wrow, wpr_w, static_cast<long>(m) - base,
                                         static_cast<long>(m + run.len)))
                    throw std::invalid_argument("voxel_minkowski: sum escapes the window");
            }
            std::uint64_t* drow = r.words.data() + static_cast<std::size_t>(jt) * r.wpr;
            if (base >= 0)
                or_shift_up_row(drow, r.wpr, wrow, wpr_w, static_cast<std::size_t>(base));
            else
                or_shift_down_row(drow, r.wpr, wrow, wpr_w, static_cast<std::size_t>(-base));
        }
    }
    clear_pad_bits(r);
    return r;
}

DensitySampler lebesgue_sampler() {
    DensitySampler s;
    s.w = [](double, double) { return 1.0; };
    s.origin_singular = false;
    s.ball_mass = [](double r) -> ExtNonneg { return kPi * r * r; };
    return s;
}

DensitySampler make_density_sampler(const DisintegratedMeasure& mu,
                                    std::function<double(double)> w0_exact) {
    if (mu.n() != 2) throw std::invalid_argument("make_density_sampler: n = 2 only");
    const DirectionGrid& g = *mu.grid;
    auto w0 = std::make_shared<std::vector<double>>(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double denom = g.weights[i] * sq(mu.rho_B[i]);
        (*w0)[i] = denom > 0.0 && mu.eta[i] > 0.0 ? mu.eta[i] / denom : 0.0;
    }
    auto rho_B = std::make_shared<std::vector<double>>(mu.rho_B);
    const LawPtr law = mu.law;
    const GridPtr grid = mu.grid;

    DensitySampler s;
    s.w = [w0, rho_B, law, grid, w0_exact](double x, double y) {
        double r = std::hypot(x, y);
        const double theta = std::atan2(y, x);
        if (r < 1e-300) r = 1e-300;
        const double rb = grid_lerp(*grid, *rho_B, theta);
        if (!(rb > 0.0)) return 0.0;
        const double a = w0_exact ? w0_exact(theta) : grid_lerp(*grid, *w0, theta);
        if (a <= 0.0) return 0.0;
        return a * rb * law->phi(r / rb) / r;
    };
    // Bounded density near the origin iff phi(t)/t stays bounded.
    const double s1 = law->phi(1e-6) / 1e-6;
    const double s2 = law->phi(1e-9) / 1e-9;
    s.origin_singular = !(std::isfinite(s2) && s2 <= 1.5 * s1 + 1e-300);
    const DisintegratedMeasure* mp = &mu;
    s.ball_mass = [mp, grid](double r) -> ExtNonneg {
        return measure_of_star(*mp, StarBody::ball(grid, r));
    };
    return s;
}

namespace {

// Midpoint value over the square unless it still touches the singularity,
// in which case recurse; cells surviving depth 6 are pooled into one ball.
struct RefineState {
    const DensitySampler* w;
    double r_unresolved = 0.0;
    bool any_unresolved = false;
};

double refine_cell(RefineState& st, double x, double y, double size, int depth) {
    if (depth >= 6) {
        st.any_unresolved = true;
        st.r_unresolved =
            std::max(st.r_unresolved, std::hypot(std::abs(x) + size / 2, std::abs(y) + size / 2));
        return 0.0;
    }
    double acc = 0.0;
    const double q = size / 4, sub = size / 2;
    for (int k = 0; k < 4; ++k) {
        const double sx = x + (k & 1 ? q : -q), sy = y + (k & 2 ? q : -q);
        const double dist = std::hypot(std::max(0.0, std::abs(sx) - q), std::max(0.0, std::abs(sy) - q));
        if (dist >= sub * 0.7071067811865476)
            acc += st.w->w(sx, sy) * sub * sub;
        else
            acc += refine_cell(st, sx, sy, sub, depth + 1);
    }
    return acc;
}

} // namespace

VoxelMass voxel_measure(const DensitySampler& w, const VoxelSet& A) {
    std::vector<double> row_totals(A.m, 0.0);
    RefineState st{&w, 0.0, false};
    const double near2 = sq(A.h * 1.0001);
    for (std::size_t iy = 0; iy < A.m; ++iy) {
        const double y = A.cy(iy);
        const std::uint64_t* row = A.words.data() + iy * A.wpr;
        double acc = 0.0;
        for (std::size_t wi = 0; wi < A.wpr; ++wi) {
            std::uint64_t word = row[wi];
            while (word != 0) {
                const std::size_t bi = static_cast<std::size_t>(std::countr_zero(word));
                word &= word - 1;
                const double x = A.cx(wi * 64 + bi);
                if (w.origin_singular && x * x + y * y <= near2)
                    acc += refine_cell(st, x, y, A.h, 0);
                else
                    acc += w.w(x, y) * A.h * A.h;
            }
        }
        row_totals[iy] = acc;
    }
    VoxelMass out;
    out.value = kernels::sum(row_totals.data(), row_totals.size());
    if (st.any_unresolved) {
        const ExtNonneg tail = w.ball_mass ? w.ball_mass(st.r_unresolved) : kInf;
        if (tail == kInf) {
            out.value = kInf;
            out.singular_flagged = true;
        } else {
            out.value += tail;
        }
    }
    if (!std::isfinite(out.value) && out.value != kInf) out.value = kInf;
    return out;
}

BoundaryEstimate voxel_boundary(const DensitySampler& w, const VoxelSet& A,
                                const VoxelSet& K, BoundarySide side,
                                const std::vector<double>& eps_schedule) {
    if (eps_schedule.size() < 3)
        throw std::invalid_argument("voxel_boundary: need at least three eps values");
    std::vector<double> sched = eps_schedule;
    std::sort(sched.begin(), sched.end());
    if (!(sched.front() > 0.0)) throw std::invalid_argument("voxel_boundary: eps > 0");
    BoundaryEstimate est;

    const bool inner = side == BoundarySide::inner;
    const VoxelSet base = inner ? voxel_not(A) : A;
    const VoxelSet kern = inner ? voxel_reflect(K) : K;
    std::vector<double> mass(sched.size(), 0.0);
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const VoxelSet grown =
            voxel_minkowski(base, voxel_scale(kern, sched[i]), 1.0, 1.0, true);
        const VoxelSet shell = inner ? voxel_and(grown, A) : voxel_and_not(grown, A);
        const VoxelMass m = voxel_measure(w, shell);
        if (m.singular_flagged || m.value == kInf) est.flagged = true;
        mass[i] = m.value;
    }
    for (std::size_t i = 0; i + 1 < sched.size(); ++i) {
        est.eps.push_back((sched[i] + sched[i + 1]) / 2);
        est.quotients.push_back((mass[i + 1] - mass[i]) / (sched[i + 1] - sched[i]));
    }

    // Least-squares line q(eps) = b + s*eps; the intercept is the estimate.
    const std::size_t n = est.eps.size();
    double se = 0, sq_ = 0, see = 0, seq = 0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(est.quotients[i])) finite = false;
    }
    if (!finite) {
        est.value = kInf;
        est.flagged = true;
        return est;
    }
    for (std::size_t i = 0; i < n; ++i) {
        se += est.eps[i];
        sq_ += est.quotients[i];
        see += est.eps[i] * est.eps[i];
        seq += est.eps[i] * est.quotients[i];
    }
    const double nn = static_cast<double>(n);
    const double det = nn * see - se * se;
    const double slope = det != 0.0 ? (nn * seq - se * sq_) / det : 0.0;
    const double b = (sq_ - slope * se) / nn;
    est.value = b;
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        resid = std::max(resid, std::abs(est.quotients[i] - (b + slope * est.eps[i])));
    est.residual = resid / std::max(std::abs(b), 1e-12);
    if (est.residual > 0.05) est.flagged = true;
    // The quotients of a first-order limit drift monotonically in eps.
    bool up = true, down = true;
    const double mtol = 1e-9 * std::max(std::abs(b), 1.0);
    for (std::size_t i = 1; i < n; ++i) {
        if (est.quotients[i] < est.quotients[i - 1] - mtol) up = false;
        if (est.quotients[i] > est.quotients[i - 1] + mtol) down = false;
    }
    if (!up && !down) est.flagged = true;
    return est;
}

GapReport radial_vs_minkowski_gap(const StarBody& A, const StarBody& B, double cone_lo,
                                  double cone_hi, double lo, double hi, double h) {
    const VoxelSet MA = voxelize(A, lo, hi, h);
    const VoxelSet MB = voxelize(B, lo, hi, h);
    const VoxelSet M1 = voxel_minkowski(MA, MB);
    const StarBody R = radial_sum(A, B);
    const VoxelSet MR = voxelize(R, lo, hi, h);

    const double span = cone_hi - cone_lo;
    const bool full = span >= 2 * kPi - 1e-12;
    VoxelSet cone = make_window(lo, hi, h);
    for (std::size_t iy = 0; iy < cone.m; ++iy)
        for (std::size_t ix = 0; ix < cone.m; ++ix) {
            if (full) {
                cone.set_bit(ix, iy);
                continue;
            }
            double t = std::atan2(cone.cy(iy), cone.cx(ix)) - cone_lo;
            t -= 2 * kPi * std::floor(t / (2 * kPi));
            if (t <= span) cone.set_bit(ix, iy);
        }

    const VoxelSet mink_in = voxel_and(M1, cone);
    const VoxelSet rad_in = voxel_and(MR, cone);
    GapReport rep;
    rep.minkowski_area = mink_in.area();
    rep.radial_area = rad_in.area();
    rep.gap_area = voxel_and_not(mink_in, rad_in).area();
    double rmax = 0.0;
    for (double r : R.rho()) rmax = std::max(rmax, r);
    rep.tolerance = h * rmax * (8 * kPi + 4);
    rep.radial_exhausts = rep.gap_area <= rep.tolerance;
    return rep;
}

void dump_pgm(const VoxelSet& a, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("dump_pgm: cannot open " + path);
    std::fprintf(f, "P5\n%zu %zu\n255\n", a.m, a.m);
    std::vector<unsigned char> line(a.m);
    for (std::size_t iy = a.m; iy-- > 0;) {
        for (std::size_t ix = 0; ix < a.m; ++ix)
            line[ix] = a.bit(ix, iy) ? 0 : 255;
        std::fwrite(line.data(), 1, line.size(), f);
    }
    std::fclose(f);
}

} // namespace geomineq
