#include "geomineq/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "geomineq/exponent.hpp"
#include "geomineq/interval.hpp"
#include "geomineq/measure.hpp"
#include "geomineq/sobolev.hpp"
#include "geomineq/verify.hpp"
#include "geomineq/version.hpp"
#include "geomineq/voxel.hpp"

namespace geomineq {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
    throw ScenarioError(ptr, msg);
}

std::string fnv_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- pointer-tracked field access ----

void need_object(const ojson& j, const std::string& ptr) {
    if (!j.is_object()) fail(ptr, "expected an object");
}

void check_keys(const ojson& j, const std::string& ptr,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) fail(ptr + "/" + item.key(), "unknown field");
    }
}

const ojson& member(const ojson& j, const std::string& ptr, const char* key) {
    need_object(j, ptr);
    const auto it = j.find(key);
    if (it == j.end()) fail(ptr, std::string("missing required field '") + key + "'");
    return *it;
}

const ojson* opt_member(const ojson& j, const char* key) {
    if (!j.is_object()) return nullptr;
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double as_num(const ojson& j, const std::string& ptr) {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "expected a finite number");
    return v;
}

double get_num(const ojson& j, const std::string& ptr, const char* key) {
    return as_num(member(j, ptr, key), ptr + "/" + key);
}

std::optional<double> opt_num(const ojson& j, const std::string& ptr, const char* key) {
    const ojson* m = opt_member(j, key);
    if (!m) return std::nullopt;
    return as_num(*m, ptr + "/" + key);
}

int get_int(const ojson& j, const std::string& ptr, const char* key, int lo, int hi,
            std::optional<int> def = {}) {
    const ojson* m = opt_member(j, key);
    if (!m) {
        if (def) return *def;
        fail(ptr, std::string("missing required field '") + key + "'");
    }
    if (!m->is_number_integer()) fail(ptr + "/" + key, "expected an integer");
    const long long v = m->get<long long>();
    if (v < lo || v > hi)
        fail(ptr + "/" + key,
             "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

std::string get_str(const ojson& j, const std::string& ptr, const char* key) {
    const ojson& m = member(j, ptr, key);
    if (!m.is_string()) fail(ptr + "/" + key, "expected a string");
    return m.get<std::string>();
}

std::vector<double> num_array(const ojson& j, const std::string& ptr, std::size_t min_len) {
    if (!j.is_array() || j.size() < min_len)
        fail(ptr, "expected an array of at least " + std::to_string(min_len) + " numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_num(j[i], ptr + "/" + std::to_string(i)));
    return out;
}

// ---- literal builders ----

Vec3 vec_n(const ojson& j, const std::string& ptr, int n) {
    const std::vector<double> v = num_array(j, ptr, static_cast<std::size_t>(n));
    if (v.size() != static_cast<std::size_t>(n))
        fail(ptr, "expected exactly " + std::to_string(n) + " coordinates");
    Vec3 out{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
    return out;
}

StarBody build_star(const ojson& j, const std::string& ptr, const GridPtr& grid, int n) {
    need_object(j, ptr);
    const std::string kind = get_str(j, ptr, "kind");
    try {
        if (kind == "disc") {
            check_keys(j, ptr, {"kind", "r"});
            const double r = get_num(j, ptr, "r");
            if (!(r > 0.0)) fail(ptr + "/r", "radius must be positive");
            return StarBody::ball(grid, r);
        }
        if (kind == "box") {
            check_keys(j, ptr, {"kind", "lo", "hi"});
            return StarBody::box(grid, vec_n(member(j, ptr, "lo"), ptr + "/lo", n),
                                 vec_n(member(j, ptr, "hi"), ptr + "/hi", n));
        }
        if (kind == "polygon") {
            check_keys(j, ptr, {"kind", "vertices"});
            if (n != 2) fail(ptr, "polygon bodies are planar");
            const ojson& vj = member(j, ptr, "vertices");
            if (!vj.is_array() || vj.size() < 3)
                fail(ptr + "/vertices", "expected at least 3 vertices");
            std::vector<std::array<double, 2>> verts;
            for (std::size_t i = 0; i < vj.size(); ++i) {
                const auto p = num_array(vj[i], ptr + "/vertices/" + std::to_string(i), 2);
                if (p.size() != 2)
                    fail(ptr + "/vertices/" + std::to_string(i), "expected [x, y]");
                verts.push_back({p[0], p[1]});
            }
            return StarBody::polygon(grid, std::move(verts));
        }
        if (kind == "star_fourier") {
            check_keys(j, ptr, {"kind", "a0", "cos", "sin"});
            if (n != 2) fail(ptr, "fourier stars are planar");
            FourierDesc f;
            f.a0 = get_num(j, ptr, "a0");
            if (const ojson* c = opt_member(j, "cos")) f.cos_coef = num_array(*c, ptr + "/cos", 0);
            if (const ojson* s = opt_member(j, "sin")) f.sin_coef = num_array(*s, ptr + "/sin", 0);
            return StarBody::fourier(grid, std::move(f));
        }
    } catch (const std::invalid_argument& e) {
        fail(ptr, e.what());
    }
    fail(ptr + "/kind", "unknown body kind '" + kind + "'");
}

ConvexBody to_convex(const StarBody& s, const std::string& ptr) {
    try {
        return star_to_convex(s);
    } catch (const std::invalid_argument& e) {
        fail(ptr, std::string("not usable as a convex body: ") + e.what());
    }
}

LawPtr build_law(const ojson& j, const std::string& ptr) {
    need_object(j, ptr);
    const std::string kind = get_str(j, ptr, "kind");
    try {
        if (kind == "power") {
            check_keys(j, ptr, {"kind", "a"});
            return power_law(get_num(j, ptr, "a"));
        }
        if (kind == "power_exp") {
            check_keys(j, ptr, {"kind"});
            return power_exp_law();
        }
        if (kind == "table") {
            check_keys(j, ptr, {"kind", "t", "phi"});
            return table_law(num_array(member(j, ptr, "t"), ptr + "/t", 2),
                             num_array(member(j, ptr, "phi"), ptr + "/phi", 2));
        }
    } catch (const std::invalid_argument& e) {
        fail(ptr, e.what());
    }
    fail(ptr + "/kind", "unknown law kind '" + kind + "'");
}

std::vector<double> build_w0(const ojson* j, const std::string& ptr, const GridPtr& grid,
                             int n) {
    if (!j) return w0_constant(*grid);
    need_object(*j, ptr);
    const std::string kind = get_str(*j, ptr, "kind");
    if (kind == "constant") {
        check_keys(*j, ptr, {"kind", "value"});
        const double v = opt_num(*j, ptr, "value").value_or(1.0);
        if (!(v > 0.0)) fail(ptr + "/value", "weight must be positive");
        return w0_constant(*grid, v);
    }
    if (kind == "cone") {
        check_keys(*j, ptr, {"kind", "half_angle", "axis"});
        const double ha = get_num(*j, ptr, "half_angle");
        if (!(ha > 0.0)) fail(ptr + "/half_angle", "half angle must be positive");
        Vec3 axis{1.0, 0.0, 0.0};
        if (const ojson* a = opt_member(*j, "axis")) axis = vec_n(*a, ptr + "/axis", n);
        return w0_cone(*grid, ha, axis);
    }
    fail(ptr + "/kind", "unknown weight kind '" + kind + "'");
}

DisintegratedMeasure build_measure(const ojson& j, const std::string& ptr,
                                   const GridPtr& grid, int n) {
    need_object(j, ptr);
    const std::string kind = get_str(j, ptr, "kind");
    if (kind == "homogeneous") {
        check_keys(j, ptr, {"kind", "p", "w0"});
        const ojson& pj = member(j, ptr, "p");
        Exponent p = Exponent::finite(0.0);
        if (pj.is_string() && (pj.get<std::string>() == "inf" || pj.get<std::string>() == "+inf"))
            p = Exponent::pos_inf();
        else
            p = Exponent::finite(as_num(pj, ptr + "/p"));
        const auto w0 = build_w0(opt_member(j, "w0"), ptr + "/w0", grid, n);
        try {
            return homogeneous_measure(w0, p, grid);
        } catch (const std::invalid_argument& e) {
            fail(ptr + "/p", e.what());
        }
    }
    if (kind == "warped") {
        check_keys(j, ptr, {"kind", "body", "phi", "w0"});
        const StarBody B = build_star(member(j, ptr, "body"), ptr + "/body", grid, n);
        const LawPtr law = build_law(member(j, ptr, "phi"), ptr + "/phi");
        const auto w0 = build_w0(opt_member(j, "w0"), ptr + "/w0", grid, n);
        try {
            return warped_measure(w0, B, law);
        } catch (const std::invalid_argument& e) {
            fail(ptr, e.what());
        }
    }
    fail(ptr + "/kind", "unknown measure kind '" + kind + "'");
}

// ---- scenario context and check resolution ----

struct Ctx {
    int n = 2;
    GridPtr grid;
    std::optional<DisintegratedMeasure> mu;
    std::map<std::string, StarBody> bodies;
    std::map<std::string, LawPtr> laws;
    std::map<std::string, ojson> functions;
    CheckOptions base_opt;
    std::optional<std::uint64_t> seed;
    bool dump_masks = false;
    std::string dump_dir = ".";
};

const StarBody& body_ref(const Ctx& ctx, const ojson& j, const std::string& ptr,
                         const char* key) {
    const std::string name = get_str(j, ptr, key);
    const auto it = ctx.bodies.find(name);
    if (it == ctx.bodies.end()) fail(ptr + "/" + key, "unknown body '" + name + "'");
    return it->second;
}

const ojson& function_ref(const Ctx& ctx, const ojson& j, const std::string& ptr,
                          const char* key) {
    const std::string name = get_str(j, ptr, key);
    const auto it = ctx.functions.find(name);
    if (it == ctx.functions.end()) fail(ptr + "/" + key, "unknown function '" + name + "'");
    return it->second;
}

double lambda_of(const ojson& j, const std::string& ptr) {
    const double l = get_num(j, ptr, "lambda");
    if (!(l > 0.0 && l < 1.0)) fail(ptr + "/lambda", "lambda must lie in (0, 1)");
    return l;
}

double q_of(const Ctx& ctx, const ojson& j, const std::string& ptr) {
    if (const auto q = opt_num(j, ptr, "q")) return *q;
    if (ctx.mu && ctx.mu->q_hom) return *ctx.mu->q_hom;
    fail(ptr, "field 'q' is required when the measure is not homogeneous");
}

const DisintegratedMeasure& mu_of(const Ctx& ctx, const std::string& ptr) {
    if (!ctx.mu) fail(ptr, "this checker needs the scenario measure");
    return *ctx.mu;
}

CheckOptions opt_of(const Ctx& ctx, const ojson& j, const std::string& ptr) {
    CheckOptions opt = ctx.base_opt;
    if (const auto t = opt_num(j, ptr, "tolerance")) {
        if (!(*t > 0.0)) fail(ptr + "/tolerance", "tolerance must be positive");
        opt.tol_analytic = *t;
    }
    if (const auto t = opt_num(j, ptr, "tolerance_voxel")) {
        if (!(*t > 0.0)) fail(ptr + "/tolerance_voxel", "tolerance must be positive");
        opt.tol_voxel = *t;
    }
    return opt;
}

double tol_of(const ojson& j, const std::string& ptr, double def) {
    const auto t = opt_num(j, ptr, "tolerance");
    if (t && !(*t > 0.0)) fail(ptr + "/tolerance", "tolerance must be positive");
    return t.value_or(def);
}

RadialFunction radial_fn(const Ctx& ctx, const ojson& jc, const std::string& ptr) {
    const ojson& fj = function_ref(ctx, jc, ptr, "f");
    const std::string fptr = ptr + "/f";
    if (get_str(fj, fptr, "kind") != "radial_pl")
        fail(fptr, "expected a radial_pl test function");
    check_keys(fj, fptr, {"kind", "knots", "values"});
    const ConvexBody gauge = to_convex(body_ref(ctx, jc, ptr, "gauge"), ptr + "/gauge");
    try {
        return RadialFunction::make(gauge, num_array(member(fj, fptr, "knots"), fptr + "/knots", 1),
                                    num_array(member(fj, fptr, "values"), fptr + "/values", 1));
    } catch (const std::invalid_argument& e) {
        fail(fptr, e.what());
    }
}

StepFunction1D step_fn(const ojson& fj, const std::string& fptr) {
    if (get_str(fj, fptr, "kind") != "step1d") fail(fptr, "expected a step1d test function");
    check_keys(fj, fptr, {"kind", "edges", "values", "far"});
    StepFunction1D s;
    s.edges = num_array(member(fj, fptr, "edges"), fptr + "/edges", 2);
    s.values = num_array(member(fj, fptr, "values"), fptr + "/values", 1);
    s.far_value = get_num(fj, fptr, "far");
    return s;
}

IntervalUnion union_of(const ojson& j, const std::string& ptr) {
    if (!j.is_array() || j.empty()) fail(ptr, "expected a nonempty array of [lo, hi] pairs");
    std::vector<IntervalUnion::Interval> parts;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string pptr = ptr + "/" + std::to_string(i);
        const ojson& pj = j[i];
        if (!pj.is_array() || pj.size() != 2) fail(pptr, "expected [lo, hi]");
        const double lo = as_num(pj[0], pptr + "/0");
        double hi = 0.0;
        if (pj[1].is_string() && pj[1].get<std::string>() == "inf")
            hi = kInf;
        else
            hi = as_num(pj[1], pptr + "/1");
        parts.push_back({lo, hi});
    }
    try {
        return IntervalUnion::from_intervals(std::move(parts));
    } catch (const std::invalid_argument& e) {
        fail(ptr, e.what());
    }
}

SobolevVariant variant_of(const std::string& s, const std::string& ptr) {
    if (s == "weak_L1") return SobolevVariant::weak_L1;
    if (s == "L_beta") return SobolevVariant::L_beta;
    if (s == "nash") return SobolevVariant::nash;
    if (s == "coarea") return SobolevVariant::coarea;
    if (s == "functional_equiv") return SobolevVariant::functional_equiv;
    fail(ptr, "unknown sobolev variant '" + s + "'");
}

void dump_mask(const Ctx& ctx, const StarBody& S, const std::string& id, const char* tag) {
    const VoxelParams& v = ctx.base_opt.voxel;
    const VoxelSet m = voxelize(S, v.lo, v.hi, v.h, VoxelFill::center);
    dump_pgm(m, ctx.dump_dir + "/" + id + "_" + tag + ".pgm");
}

using Task = std::function<std::vector<IneqReport>()>;

/// Validates one check entry and returns the ready-to-run task. All name
/// resolution and range validation happens here, single-threaded, so config
/// errors surface deterministically before any work starts.
Task resolve_check(const Ctx& ctx, const ojson& jc, const std::string& ptr,
                   const std::string& id) {
    need_object(jc, ptr);
    const std::string checker = get_str(jc, ptr, "checker");

    if (checker == "bm") {
        check_keys(jc, ptr, {"checker", "id", "mode", "A", "B", "lambda", "q", "tolerance",
                             "tolerance_voxel"});
        const auto& mu = mu_of(ctx, ptr);
        const ConvexBody A = to_convex(body_ref(ctx, jc, ptr, "A"), ptr + "/A");
        const ConvexBody B = to_convex(body_ref(ctx, jc, ptr, "B"), ptr + "/B");
        const double lambda = lambda_of(jc, ptr);
        const double q = q_of(ctx, jc, ptr);
        const CheckOptions opt = opt_of(ctx, jc, ptr);
        return [&mu, A, B, lambda, q, opt] {
            return std::vector<IneqReport>{check_bm(mu, A, B, lambda, q, opt)};
        };
    }
    if (checker == "cbm") {
        check_keys(jc, ptr, {"checker", "id", "mode", "A", "B", "lambda", "q", "tolerance",
                             "tolerance_voxel"});
        const auto& mu = mu_of(ctx, ptr);
        const StarBody& A = body_ref(ctx, jc, ptr, "A");
        const StarBody& B = body_ref(ctx, jc, ptr, "B");
        const double lambda = lambda_of(jc, ptr);
        const double q = q_of(ctx, jc, ptr);
        const CheckOptions opt = opt_of(ctx, jc, ptr);
        if (ctx.dump_masks) {
            dump_mask(ctx, A, id, "A");
            dump_mask(ctx, B, id, "B");
        }
        return [&mu, &A, &B, lambda, q, opt] {
            return std::vector<IneqReport>{check_cbm(mu, A, B, lambda, q, opt)};
        };
    }
    if (checker == "iso") {
        check_keys(jc, ptr, {"checker", "id", "mode", "K", "A", "q", "tolerance",
                             "tolerance_voxel"});
        const auto& mu = mu_of(ctx, ptr);
        const ConvexBody K = to_convex(body_ref(ctx, jc, ptr, "K"), ptr + "/K");
        const StarBody& A = body_ref(ctx, jc, ptr, "A");
        const double q = q_of(ctx, jc, ptr);
        const CheckOptions opt = opt_of(ctx, jc, ptr);
        if (q > 0.0)
            return [&mu, K, &A, q, opt] {
                return std::vector<IneqReport>{check_isoperimetry(mu, K, A, q, opt)};
            };
        return [&mu, K, &A, q, opt] {
            return std::vector<IneqReport>{check_isoperimetry(mu, K, CoStar{A}, q, opt)};
        };
    }
    if (checker == "ocbm_nd") {
        check_keys(jc, ptr, {"checker", "id", "mode", "A", "B", "t", "tolerance",
                             "tolerance_voxel"});
        const auto& mu = mu_of(ctx, ptr);
        const StarBody& A = body_ref(ctx, jc, ptr, "A");
        const StarBody& B = body_ref(ctx, jc, ptr, "B");
        const double t = get_num(jc, ptr, "t");
        if (!(t >= 0.0)) fail(ptr + "/t", "t must be nonnegative");
        const CheckOptions opt = opt_of(ctx, jc, ptr);
        return [&mu, &A, &B, t, opt] {
            return std::vector<IneqReport>{check_ocbm_nd(mu, A, B, t, opt)};
        };
    }
    if (checker == "iso_warped") {
        check_keys(jc, ptr, {"checker", "id", "mode", "B", "C", "tolerance",
                             "tolerance_voxel"});
        const auto& mu = mu_of(ctx, ptr);
        const StarBody& B = body_ref(ctx, jc, ptr, "B");
        const StarBody& C = body_ref(ctx, jc, ptr, "C");
        const CheckOptions opt = opt_of(ctx, jc, ptr);
        return [&mu, &B, &C, opt] {
            return std::vector<IneqReport>{check_iso_warped(mu, B, CoStar{C}, opt)};
        };
    }
    if (checker == "bonnesen") {
        check_keys(jc, ptr, {"checker", "id", "mode", "A", "B", "q", "steps", "tolerance",
                             "affine_tolerance"});
        const auto& mu = mu_of(ctx, ptr);
        const ConvexBody A = to_convex(body_ref(ctx, jc, ptr, "A"), ptr + "/A");
        const ConvexBody B = to_convex(body_ref(ctx, jc, ptr, "B"), ptr + "/B");
        const double q = q_of(ctx, jc, ptr);
        const int steps = get_int(jc, ptr, "steps", 3, 256, 16);
        const double tol = tol_of(jc, ptr, 1e-9);
        const auto affine = opt_num(jc, ptr, "affine_tolerance");
        if (affine && !(*affine > 0.0)) fail(ptr + "/affine_tolerance", "must be positive");
        return [&mu, A, B, q, steps, tol, affine] {
            const BonnesenReport br = bonnesen_concavity(mu, A, B, q, steps, tol);
            std::vector<IneqReport> out{br.concave};
            if (affine)
                out.push_back(make_report("bonnesen_affinity", br.affinity_defect, *affine,
                                          Orientation::LE, 1e-9, CheckMode::assert_mode,
                                          "closed_form", br.concave.witness,
                                          "max chord deviation of Psi, scale-relative"));
            return out;
        };
    }
    if (checker == "ocbm_1d") {
        check_keys(jc, ptr, {"checker", "id", "mode", "law", "A", "b", "t", "tolerance"});
        const ojson& lj = member(jc, ptr, "law");
        LawPtr law;
        if (lj.is_string()) {
            const auto it = ctx.laws.find(lj.get<std::string>());
            if (it == ctx.laws.end())
                fail(ptr + "/law", "unknown law '" + lj.get<std::string>() + "'");
            law = it->second;
        } else {
            law = build_law(lj, ptr + "/law");
        }
        const IntervalUnion A = union_of(member(jc, ptr, "A"), ptr + "/A");
        const double b = get_num(jc, ptr, "b");
        if (!(b > 0.0)) fail(ptr + "/b", "b must be positive");
        const double t = get_num(jc, ptr, "t");
        if (!(t >= 0.0)) fail(ptr + "/t", "t must be nonnegative");
        const double tol = tol_of(jc, ptr, 1e-10);
        return [law, A, b, t, tol] {
            return std::vector<IneqReport>{ocbm_1d(*law, A, b, t, tol)};
        };
    }
    if (checker == "homogeneity") {
        check_keys(jc, ptr, {"checker", "id", "mode", "q", "trials"});
        const auto& mu = mu_of(ctx, ptr);
        const double q = q_of(ctx, jc, ptr);
        const int trials = get_int(jc, ptr, "trials", 1, 100000, 32);
        const std::uint64_t seed = ctx.seed.value_or(0x9e3779b97f4a7c15ULL);
        return [&mu, q, trials, seed] {
            return std::vector<IneqReport>{check_homogeneity(mu, q, trials, seed)};
        };
    }
    if (checker == "closure") {
        check_keys(jc, ptr, {"checker", "id", "mode", "weights", "T", "q_prime", "tolerance",
                             "tolerance_voxel"});
        const auto& mu = mu_of(ctx, ptr);
        if (ctx.n != 2) fail(ptr, "the closure battery is planar");
        const std::vector<double> weights =
            num_array(member(jc, ptr, "weights"), ptr + "/weights", 1);
        if (weights.size() > 4) fail(ptr + "/weights", "at most 4 quarter-turn components");
        const std::vector<double> Tv = num_array(member(jc, ptr, "T"), ptr + "/T", 4);
        if (Tv.size() != 4) fail(ptr + "/T", "expected a row-major 2x2 matrix");
        const std::array<double, 4> T{Tv[0], Tv[1], Tv[2], Tv[3]};
        const double q = q_of(ctx, jc, ptr);
        const double qp = get_num(jc, ptr, "q_prime");
        if (!(qp >= q)) fail(ptr + "/q_prime", "q_prime must be >= q");
        const CheckOptions opt = opt_of(ctx, jc, ptr);
        std::vector<DisintegratedMeasure> mus;
        for (std::size_t k = 0; k < weights.size(); ++k)
            mus.push_back(rotate_measure_quarter(mu, static_cast<int>(k)));
        return [mus = std::move(mus), weights, T, q, qp, opt] {
            return closure_suite(mus, weights, T, q, qp, opt);
        };
    }
    if (checker == "profile_search") {
        check_keys(jc, ptr, {"checker", "id", "mode", "K", "v", "degree", "budget",
                             "tolerance"});
        const auto& mu = mu_of(ctx, ptr);
        const ConvexBody K = to_convex(body_ref(ctx, jc, ptr, "K"), ptr + "/K");
        const double v = get_num(jc, ptr, "v");
        if (!(v > 0.0)) fail(ptr + "/v", "target mass must be positive");
        const int degree = get_int(jc, ptr, "degree", 0, 8, 3);
        const int budget = get_int(jc, ptr, "budget", 16, 1000000, 4000);
        const double tol = tol_of(jc, ptr, 1e-3);
        const std::uint64_t seed = ctx.seed.value_or(0x51ed270b0f4a92c1ULL);
        return [&mu, K, v, degree, budget, tol, seed] {
            const ProfileSearchResult r = profile_search(mu, K, v, degree, budget, seed);
            std::ostringstream w;
            w << "v=" << fmt_double(v) << " mass=" << fmt_double(r.mass)
              << " fourier_tail=" << fmt_double(r.fourier_tail)
              << " evaluations=" << r.evaluations;
            return std::vector<IneqReport>{make_report(
                "profile_search", r.best_boundary, r.bound, Orientation::GE, tol,
                CheckMode::assert_mode, "nelder_mead", w.str(),
                r.converged ? "search converged" : "search stopped at the budget")};
        };
    }
    if (checker == "sobolev") {
        check_keys(jc, ptr, {"checker", "id", "mode", "f", "gauge", "variant", "beta",
                             "tolerance"});
        const auto& mu = mu_of(ctx, ptr);
        const RadialFunction f = radial_fn(ctx, jc, ptr);
        const SobolevVariant variant =
            variant_of(get_str(jc, ptr, "variant"), ptr + "/variant");
        const std::optional<double> beta = opt_num(jc, ptr, "beta");
        const double tol = tol_of(jc, ptr, 1e-6);
        return [&mu, f, variant, beta, tol] {
            return std::vector<IneqReport>{check_sobolev(f, mu, variant, beta, tol)};
        };
    }
    if (checker == "functional_cbm") {
        check_keys(jc, ptr, {"checker", "id", "mode", "f", "g", "lambda", "q", "tolerance"});
        const auto& mu = mu_of(ctx, ptr);
        const double lambda = lambda_of(jc, ptr);
        const double q = q_of(ctx, jc, ptr);
        const ojson& fj = function_ref(ctx, jc, ptr, "f");
        const ojson& gj = function_ref(ctx, jc, ptr, "g");
        if (ctx.n == 1) {
            const StepFunction1D f = step_fn(fj, ptr + "/f");
            const StepFunction1D g = step_fn(gj, ptr + "/g");
            const double tol = tol_of(jc, ptr, 1e-9);
            return [&mu, f, g, lambda, q, tol] {
                return std::vector<IneqReport>{functional_cbm(f, g, lambda, mu, q, tol)};
            };
        }
        if (ctx.n != 2) fail(ptr, "functional_cbm needs a 1-D or planar scenario");
        auto indicator = [&](const ojson& fn, const std::string& fptr) {
            if (get_str(fn, fptr, "kind") != "complement_indicator")
                fail(fptr, "expected a complement_indicator test function in 2-D");
            check_keys(fn, fptr, {"kind", "body"});
            const StarBody& S = body_ref(ctx, fn, fptr, "body");
            const VoxelParams& v = ctx.base_opt.voxel;
            return indicator_complement(S, v.lo, v.hi, v.h);
        };
        const GridFunction2D f = indicator(fj, ptr + "/f");
        const GridFunction2D g = indicator(gj, ptr + "/g");
        const double tol = tol_of(jc, ptr, 1e-3);
        if (ctx.dump_masks) {
            dump_mask(ctx, body_ref(ctx, fj, ptr + "/f", "body"), id, "f");
            dump_mask(ctx, body_ref(ctx, gj, ptr + "/g", "body"), id, "g");
        }
        return [&mu, f, g, lambda, q, tol] {
            return std::vector<IneqReport>{functional_cbm(f, g, lambda, mu, q, tol)};
        };
    }
    fail(ptr + "/checker", "unknown checker '" + checker + "'");
}

} // namespace

ScenarioReport run_scenario_text(const std::string& text, const ScenarioOverrides& ov) {
    const auto t0 = std::chrono::steady_clock::now();
    const ojson doc = ojson::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("", "not valid JSON");
    need_object(doc, "");
    check_keys(doc, "",
               {"description", "dimension", "grid", "seed", "measure", "bodies", "laws",
                "functions", "oracle", "checks"});

    Ctx ctx;
    ctx.n = get_int(doc, "", "dimension", 1, 3);
    int resolution = get_int(doc, "", "grid", 8, 1 << 20, 4096);
    if (ov.grid) resolution = *ov.grid;
    ctx.grid = make_grid(ctx.n, resolution);
    if (const ojson* s = opt_member(doc, "seed")) {
        if (!s->is_number_integer() || s->get<long long>() < 0)
            fail("/seed", "expected a nonnegative integer");
        ctx.seed = static_cast<std::uint64_t>(s->get<long long>());
    }
    ctx.mu = build_measure(member(doc, "", "measure"), "/measure", ctx.grid, ctx.n);

    if (const ojson* bj = opt_member(doc, "bodies")) {
        need_object(*bj, "/bodies");
        for (const auto& item : bj->items())
            ctx.bodies.emplace(item.key(), build_star(item.value(), "/bodies/" + item.key(),
                                                      ctx.grid, ctx.n));
    }
    if (const ojson* lj = opt_member(doc, "laws")) {
        need_object(*lj, "/laws");
        for (const auto& item : lj->items())
            ctx.laws.emplace(item.key(), build_law(item.value(), "/laws/" + item.key()));
    }
    if (const ojson* fj = opt_member(doc, "functions")) {
        need_object(*fj, "/functions");
        for (const auto& item : fj->items()) {
            need_object(item.value(), "/functions/" + item.key());
            ctx.functions.emplace(item.key(), item.value());
        }
    }
    if (const ojson* oj = opt_member(doc, "oracle")) {
        check_keys(*oj, "/oracle", {"window", "h"});
        const double w = opt_num(*oj, "/oracle", "window").value_or(4.0);
        if (!(w > 0.0)) fail("/oracle/window", "window must be positive");
        ctx.base_opt.voxel.lo = -w;
        ctx.base_opt.voxel.hi = w;
        const double h = opt_num(*oj, "/oracle", "h").value_or(ctx.base_opt.voxel.h);
        if (!(h > 0.0)) fail("/oracle/h", "cell size must be positive");
        ctx.base_opt.voxel.h = h;
    }
    if (ov.oracle_h) ctx.base_opt.voxel.h = *ov.oracle_h;
    ctx.dump_masks = ov.dump_masks;
    ctx.dump_dir = ov.dump_dir;

    const ojson& checks = member(doc, "", "checks");
    if (!checks.is_array() || checks.empty()) fail("/checks", "expected a nonempty array");

    struct Entry {
        std::string id, ptr, mode;
        Task task;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const std::string ptr = "/checks/" + std::to_string(i);
        const ojson& jc = checks[i];
        need_object(jc, ptr);
        const std::string checker = get_str(jc, ptr, "checker");
        if (ov.only_checker && checker != *ov.only_checker) continue;
        std::string id = checker + "_" + std::to_string(i);
        if (const ojson* idj = opt_member(jc, "id")) {
            if (!idj->is_string()) fail(ptr + "/id", "expected a string");
            id = idj->get<std::string>();
        }
        std::string mode = "assert";
        if (const ojson* mj = opt_member(jc, "mode")) {
            if (!mj->is_string() ||
                (mj->get<std::string>() != "assert" && mj->get<std::string>() != "diagnostic"))
                fail(ptr + "/mode", "expected \"assert\" or \"diagnostic\"");
            mode = mj->get<std::string>();
        }
        entries.push_back({id, ptr, mode, resolve_check(ctx, jc, ptr, id)});
    }

    // Work pool: checks are pure, so scheduling cannot change the results;
    // assembly below is in declared order.
    std::vector<std::vector<IneqReport>> results(entries.size());
    std::vector<std::optional<ScenarioError>> errors(entries.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= entries.size()) return;
            try {
                results[i] = entries[i].task();
            } catch (const ScenarioError& e) {
                errors[i] = e;
            } catch (const std::exception& e) {
                errors[i] = ScenarioError(entries[i].ptr, e.what());
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min<std::size_t>(hw, entries.size());
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k + 1 < nthreads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) throw *e;

    ScenarioReport out;
    out.version = kVersion;
    out.digest = fnv_digest(text);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (IneqReport r : results[i]) {
            if (entries[i].mode == "diagnostic") r.mode = CheckMode::diagnostic;
            out.ids.push_back(entries[i].id);
            if (r.pass)
                ++out.summary.passed;
            else if (r.mode == CheckMode::diagnostic)
                ++out.summary.diagnostics;
            else
                ++out.summary.failed;
            out.checks.push_back(std::move(r));
        }
    }
    out.total_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    return out;
}

ScenarioReport run_scenario_file(const std::string& path, const ScenarioOverrides& ov) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("", "cannot read scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return run_scenario_text(ss.str(), ov);
}

int exit_code(const ScenarioReport& r) { return r.summary.failed > 0 ? 1 : 0; }

namespace {

ojson jnum(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace

std::string report_json(const ScenarioReport& r, bool with_timing) {
    ojson doc;
    doc["version"] = r.version;
    doc["digest"] = r.digest;
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const IneqReport& c = r.checks[i];
        ojson jc;
        jc["id"] = r.ids[i];
        jc["name"] = c.name;
        jc["lhs"] = jnum(c.lhs);
        jc["rhs"] = jnum(c.rhs);
        jc["slack"] = jnum(c.slack);
        jc["oriented_slack"] = jnum(c.oriented_slack);
        jc["rel_tolerance"] = jnum(c.rel_tolerance);
        jc["pass"] = c.pass;
        jc["orientation"] = orientation_str(c.orientation);
        jc["mode"] = mode_str(c.mode);
        jc["path"] = c.path;
        jc["witness"] = c.witness;
        jc["notes"] = c.notes;
        arr.push_back(std::move(jc));
    }
    doc["checks"] = std::move(arr);
    doc["summary"] = {{"passed", r.summary.passed},
                      {"failed", r.summary.failed},
                      {"diagnostics", r.summary.diagnostics}};
    if (with_timing) doc["timing"] = {{"total_ms", r.total_ms}};
    return doc.dump(2) + "\n";
}

std::string report_csv(const ScenarioReport& r) {
    std::ostringstream os;
    os << "check,name,lhs,rhs,slack,pass\n";
    char buf[64];
    auto put = [&os, &buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        os << buf;
    };
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const IneqReport& c = r.checks[i];
        os << r.ids[i] << "," << c.name << ",";
        put(c.lhs);
        os << ",";
        put(c.rhs);
        os << ",";
        put(c.slack);
        os << "," << (c.pass ? 1 : 0) << "\n";
    }
    return os.str();
}

std::vector<std::string> emit_fixtures(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> names;
    for (const auto& [name, text] : bundled_scenarios()) {
        {
            std::ofstream f(dir + "/" + name + ".json", std::ios::binary);
            if (!f) fail("", "cannot write to '" + dir + "'");
            f << text;
        }
        const ScenarioReport rep = run_scenario_text(text);
        std::ofstream c(dir + "/" + name + ".expected.csv", std::ios::binary);
        if (!c) fail("", "cannot write to '" + dir + "'");
        c << report_csv(rep);
        names.push_back(name);
    }
    return names;
}

} // namespace geomineq
