#include "geomineq/scenario.hpp"

namespace geomineq {

namespace {

const char* kE1Sharpness = R"json({
  "description": "negative-q sharpness: isoperimetric equality at complements of discs, complemented BM on homothets, one-sided growth, and the functional forms",
  "dimension": 2,
  "grid": 4096,
  "seed": 1,
  "measure": {"kind": "homogeneous", "p": -0.3333333333333333, "w0": {"kind": "constant"}},
  "bodies": {
    "disc_half": {"kind": "disc", "r": 0.5},
    "disc1": {"kind": "disc", "r": 1.0},
    "disc2": {"kind": "disc", "r": 2.0},
    "disc4": {"kind": "disc", "r": 4.0}
  },
  "functions": {
    "f1": {"kind": "radial_pl", "knots": [0.0, 1.0, 2.0], "values": [0.0, 0.0, 1.0]}
  },
  "checks": [
    {"checker": "iso", "id": "iso_half", "K": "disc1", "A": "disc_half", "tolerance": 1e-9},
    {"checker": "iso", "id": "iso_1", "K": "disc1", "A": "disc1", "tolerance": 1e-9},
    {"checker": "iso", "id": "iso_2", "K": "disc1", "A": "disc2", "tolerance": 1e-9},
    {"checker": "iso", "id": "iso_4", "K": "disc1", "A": "disc4", "tolerance": 1e-9},
    {"checker": "cbm", "id": "cbm_12", "A": "disc1", "B": "disc2", "lambda": 0.5},
    {"checker": "cbm", "id": "cbm_11", "A": "disc1", "B": "disc1", "lambda": 0.3},
    {"checker": "cbm", "id": "cbm_24", "A": "disc2", "B": "disc4", "lambda": 0.25},
    {"checker": "cbm", "id": "cbm_h2", "A": "disc_half", "B": "disc2", "lambda": 0.7},
    {"checker": "ocbm_nd", "id": "ocbm_1", "A": "disc1", "B": "disc1", "t": 1.0, "tolerance": 1e-9},
    {"checker": "ocbm_nd", "id": "ocbm_2", "A": "disc2", "B": "disc1", "t": 0.5, "tolerance": 1e-9},
    {"checker": "sobolev", "id": "sob_weak", "f": "f1", "gauge": "disc1", "variant": "weak_L1"},
    {"checker": "sobolev", "id": "sob_coarea", "f": "f1", "gauge": "disc1", "variant": "coarea"}
  ]
})json";

const char* kSobolevBetaDiagnostic = R"json({
  "description": "functional suite on the |x|^-3 plane measure; the classical-constant L_beta bound is recorded as a diagnostic and fails honestly at this scale",
  "dimension": 2,
  "grid": 4096,
  "seed": 1,
  "measure": {"kind": "homogeneous", "p": -0.3333333333333333, "w0": {"kind": "constant"}},
  "bodies": {
    "disc1": {"kind": "disc", "r": 1.0}
  },
  "functions": {
    "f1": {"kind": "radial_pl", "knots": [0.0, 1.0, 2.0], "values": [0.0, 0.0, 1.0]}
  },
  "checks": [
    {"checker": "sobolev", "id": "weak_L1", "f": "f1", "gauge": "disc1", "variant": "weak_L1"},
    {"checker": "sobolev", "id": "nash", "f": "f1", "gauge": "disc1", "variant": "nash"},
    {"checker": "sobolev", "id": "coarea", "f": "f1", "gauge": "disc1", "variant": "coarea"},
    {"checker": "sobolev", "id": "functional_equiv", "f": "f1", "gauge": "disc1", "variant": "functional_equiv"},
    {"checker": "sobolev", "id": "L_beta_quarter", "f": "f1", "gauge": "disc1", "variant": "L_beta", "beta": 0.25}
  ]
})json";

const char* kPositiveQLebesgue = R"json({
  "description": "positive-q side under the plane Lebesgue measure: classical isoperimetric and Brunn-Minkowski equalities, Bonnesen-style concavity",
  "dimension": 2,
  "grid": 4096,
  "seed": 1,
  "measure": {"kind": "homogeneous", "p": "inf", "w0": {"kind": "constant"}},
  "bodies": {
    "disc1": {"kind": "disc", "r": 1.0},
    "disc2": {"kind": "disc", "r": 2.0},
    "disc3": {"kind": "disc", "r": 3.0},
    "slab": {"kind": "box", "lo": [-1.0, -0.5], "hi": [1.0, 0.5]},
    "tri": {"kind": "polygon", "vertices": [[2.0, 0.0], [-1.0, 1.5], [-1.0, -1.5]]}
  },
  "checks": [
    {"checker": "iso", "id": "iso_disc", "K": "disc1", "A": "disc2", "tolerance": 1e-9},
    {"checker": "bm", "id": "bm_homothets", "A": "disc1", "B": "disc2", "lambda": 0.5, "tolerance": 1e-9},
    {"checker": "bm", "id": "bm_disc_slab", "A": "disc1", "B": "slab", "lambda": 0.4},
    {"checker": "bm", "id": "bm_disc_tri", "A": "disc1", "B": "tri", "lambda": 0.6},
    {"checker": "bonnesen", "id": "bonnesen_discs", "A": "disc1", "B": "disc3", "affine_tolerance": 1e-9},
    {"checker": "homogeneity", "id": "homogeneity", "trials": 32}
  ]
})json";

const char* kQuadrantCone = R"json({
  "description": "cone-restricted Lebesgue measure on the first quadrant: quarter-disc equalities",
  "dimension": 2,
  "grid": 4096,
  "seed": 1,
  "measure": {
    "kind": "homogeneous",
    "p": "inf",
    "w0": {"kind": "cone", "half_angle": 0.7853981633974483, "axis": [0.7071067811865476, 0.7071067811865476]}
  },
  "bodies": {
    "disc1": {"kind": "disc", "r": 1.0},
    "disc2": {"kind": "disc", "r": 2.0}
  },
  "checks": [
    {"checker": "iso", "id": "iso_quarter", "K": "disc1", "A": "disc2", "tolerance": 1e-9},
    {"checker": "bm", "id": "bm_quarter", "A": "disc1", "B": "disc2", "lambda": 0.5, "tolerance": 1e-9},
    {"checker": "bonnesen", "id": "bonnesen_quarter", "A": "disc1", "B": "disc2", "affine_tolerance": 1e-9},
    {"checker": "homogeneity", "id": "homogeneity", "trials": 32}
  ]
})json";

const char* kOnedimOcbm = R"json({
  "description": "1-D one-sided complemented BM with exact fractions, plus the functional complemented form on step functions",
  "dimension": 1,
  "seed": 1,
  "measure": {"kind": "homogeneous", "p": -0.6666666666666666, "w0": {"kind": "constant"}},
  "laws": {
    "pw2": {"kind": "power", "a": 2.0}
  },
  "functions": {
    "sf": {"kind": "step1d", "edges": [-2.0, 2.0], "values": [0.0], "far": 1.0},
    "sg": {"kind": "step1d", "edges": [-4.0, 2.0], "values": [0.0], "far": 1.0}
  },
  "checks": [
    {"checker": "ocbm_1d", "id": "exact_fifth", "law": "pw2", "A": [[0.0, 2.0]], "b": 1.0, "t": 3.0},
    {"checker": "ocbm_1d", "id": "exact_two_comp", "law": "pw2", "A": [[0.0, 1.0], [2.0, 3.0]], "b": 1.0, "t": 1.0},
    {"checker": "ocbm_1d", "id": "strict_pair", "law": "pw2", "A": [[0.0, 0.5], [1.0, 1.5]], "b": 2.0, "t": 0.5},
    {"checker": "functional_cbm", "id": "fcbm_equal", "f": "sf", "g": "sf", "lambda": 0.5},
    {"checker": "functional_cbm", "id": "fcbm_mixed", "f": "sf", "g": "sg", "lambda": 0.3}
  ]
})json";

const char* kWarpedPowerExp = R"json({
  "description": "warped measure phi(t) = t^-2 e^(1/t) over the unit disc: warped isoperimetric equality at complements of dilates, one-sided growth, and the radial coarea chain",
  "dimension": 2,
  "grid": 4096,
  "seed": 1,
  "measure": {"kind": "warped", "body": {"kind": "disc", "r": 1.0}, "phi": {"kind": "power_exp"}},
  "bodies": {
    "disc_half": {"kind": "disc", "r": 0.5},
    "disc1": {"kind": "disc", "r": 1.0},
    "disc2": {"kind": "disc", "r": 2.0}
  },
  "functions": {
    "f1": {"kind": "radial_pl", "knots": [0.0, 1.0, 2.0], "values": [0.0, 0.0, 1.0]}
  },
  "checks": [
    {"checker": "iso_warped", "id": "iso_t1", "B": "disc1", "C": "disc1", "tolerance": 1e-9},
    {"checker": "iso_warped", "id": "iso_t2", "B": "disc1", "C": "disc2", "tolerance": 1e-9},
    {"checker": "ocbm_nd", "id": "grow_equal", "A": "disc1", "B": "disc1", "t": 1.0, "tolerance": 1e-9},
    {"checker": "ocbm_nd", "id": "grow_half", "A": "disc_half", "B": "disc1", "t": 0.5, "tolerance": 1e-9},
    {"checker": "sobolev", "id": "coarea", "f": "f1", "gauge": "disc1", "variant": "coarea", "tolerance": 1e-9},
    {"checker": "sobolev", "id": "functional_equiv", "f": "f1", "gauge": "disc1", "variant": "functional_equiv"}
  ]
})json";

const char* kClosureVoxel = R"json({
  "description": "closure battery (mixtures, linear pushforward, q-monotonicity), a non-convex voxel-path complemented BM pair, the functional form on indicator complements, and the minimizer search",
  "dimension": 2,
  "grid": 4096,
  "seed": 1,
  "measure": {"kind": "homogeneous", "p": -0.3333333333333333, "w0": {"kind": "constant"}},
  "bodies": {
    "disc1": {"kind": "disc", "r": 1.0},
    "star_a": {"kind": "star_fourier", "a0": 1.0, "cos": [0.0, 0.0, 0.25], "sin": []},
    "star_b": {"kind": "star_fourier", "a0": 1.1, "cos": [], "sin": [0.0, 0.0, 0.2]}
  },
  "functions": {
    "compA": {"kind": "complement_indicator", "body": "disc1"},
    "compB": {"kind": "complement_indicator", "body": "star_a"}
  },
  "oracle": {"window": 4.0, "h": 0.0078125},
  "checks": [
    {"checker": "cbm", "id": "cbm_stars", "A": "star_a", "B": "star_b", "lambda": 0.45},
    {"checker": "closure", "id": "closure", "weights": [0.6, 0.4], "T": [1.1, 0.2, -0.1, 0.9], "q_prime": -0.5},
    {"checker": "functional_cbm", "id": "fcbm_indicators", "f": "compA", "g": "compB", "lambda": 0.5},
    {"checker": "profile_search", "id": "prof_pi", "K": "disc1", "v": 3.141592653589793, "degree": 3, "budget": 2000}
  ]
})json";

} // namespace

const std::vector<std::pair<std::string, std::string>>& bundled_scenarios() {
    static const std::vector<std::pair<std::string, std::string>> scenarios = {
        {"e1_sharpness", kE1Sharpness},
        {"sobolev_beta_diagnostic", kSobolevBetaDiagnostic},
        {"positive_q_lebesgue", kPositiveQLebesgue},
        {"quadrant_cone", kQuadrantCone},
        {"onedim_ocbm", kOnedimOcbm},
        {"warped_power_exp", kWarpedPowerExp},
        {"closure_voxel", kClosureVoxel},
    };
    return scenarios;
}

} // namespace geomineq
