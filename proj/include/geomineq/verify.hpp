#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geomineq/body.hpp"
#include "geomineq/common.hpp"
#include "geomineq/measure.hpp"
#include "geomineq/report.hpp"

namespace geomineq {

/// Voxel-route parameters for checks that fall back to the planar oracle.
struct VoxelParams {
    double lo = -4.0;
    double hi = 4.0;
    double h = 1.0 / 128.0;
};

/// Tolerances per evaluation route; the report carries the one actually used.
struct CheckOptions {
    double tol_analytic = 1e-6;
    double tol_voxel = 1e-3;
    VoxelParams voxel;
};

/// True when the star body is convex: by descriptor for balls, boxes and
/// polygons, by hull-area deficit (n = 2) otherwise.
bool is_convex_star(const StarBody& S, double rel_tol = 1e-9);

/// Convex view of a star body: exact for descriptor bodies, support-hull
/// reconstruction for convex grid bodies (n = 2). Throws when the body is
/// measurably non-convex or the dimension has no reconstruction.
ConvexBody star_to_convex(const StarBody& S);

/// mu(lambda A + (1-lambda) B) >= M_q(mu(A), mu(B)), q <= 1/n.
IneqReport check_bm(const DisintegratedMeasure& mu, const ConvexBody& A,
                    const ConvexBody& B, double lambda, double q,
                    const CheckOptions& opt = {});

/// Complemented version: mu(complement of lambda A + (1-lambda) B) <=
/// M_q(mu(complement A), mu(complement B)). Convex pairs evaluate through
/// exact support sums; non-convex planar pairs route through the voxel
/// oracle (the report's path says which).
IneqReport check_cbm(const DisintegratedMeasure& mu, const StarBody& A,
                     const StarBody& B, double lambda, double q,
                     const CheckOptions& opt = {});

/// Isoperimetry, q > 0 branch: mu+(A) >= (1/q) mu(K)^q mu(A)^(1-q).
IneqReport check_isoperimetry(const DisintegratedMeasure& mu, const ConvexBody& K,
                              const StarBody& A, double q,
                              const CheckOptions& opt = {});

/// Isoperimetry, q < 0 branch: mu-(C) >= -(1/q) mu(complement K)^q mu(C)^(1-q).
IneqReport check_isoperimetry(const DisintegratedMeasure& mu, const ConvexBody& K,
                              const CoStar& C, double q, const CheckOptions& opt = {});

/// One-sided complemented BM for dilations by the measure's own body:
/// mu(complement of A + t B) <= Phi_hat(Phi_hat^-1(mu(complement A)) +
/// t Phi_hat^-1(mu(complement B))). B must be a scaled copy of the body the
/// measure was built on. A law without the log-convexity flag only attaches
/// a hypothesis warning to the report notes.
IneqReport check_ocbm_nd(const DisintegratedMeasure& mu, const StarBody& A,
                         const StarBody& B, double t, const CheckOptions& opt = {});

/// Warped isoperimetry: mu-_B(C) >= I_hat(mu(C)) with I_hat = phi_hat o
/// Phi_hat^-1 of the normalized law.
IneqReport check_iso_warped(const DisintegratedMeasure& mu, const StarBody& B,
                            const CoStar& C, const CheckOptions& opt = {});

struct BonnesenReport {
    std::vector<double> t;   // sample points in [0, 1]
    std::vector<double> psi; // mu((1-t)A + tB)^q
    double concavity_defect = 0.0; // min midpoint defect; >= -tol when concave
    double affinity_defect = 0.0;  // max chord deviation relative to scale
    IneqReport concave;            // assertable concavity claim
};

/// Samples Psi(t) = mu((1-t)A + tB)^q on a uniform grid. Concavity is the
/// assertable claim; the affinity defect vanishes exactly on equality cases.
BonnesenReport bonnesen_concavity(const DisintegratedMeasure& mu, const ConvexBody& A,
                                  const ConvexBody& B, double q, int steps = 16,
                                  double rel_tolerance = 1e-9);

struct EqualityDiagnosis {
    double ratio = 0.0;              // median of rho_A / rho_B over the support
    double homothety_residual = 0.0; // eta-weighted L1 misfit, scale-relative
    double convexity_deficit = 0.0;  // hull-minus-body area of A (n = 2)
    std::optional<std::array<double, 2>> shift; // from the translation search
};

/// Measures how far (A, B) are from homothety on the directions eta charges:
/// ratio m = median rho_A/rho_B, residual = sum eta |rho_A - m rho_B| /
/// sum eta rho_A. With translation_search (positive-q cases), a support-space
/// least-squares fit h_A ~ m h_B + <b, theta> reports the shift b and the
/// residual after it.
EqualityDiagnosis equality_diagnostics(const StarBody& A, const StarBody& B,
                                       const std::vector<double>& eta_support,
                                       bool translation_search = false);

/// Support-space variant for convex bodies given by support vectors; bodies
/// away from the origin (e.g. translates) are representable here. No
/// convexity deficit is computed.
EqualityDiagnosis equality_diagnostics_supports(const DirectionGrid& g,
                                                const std::vector<double>& hA,
                                                const std::vector<double>& hB,
                                                bool translation_search);

/// Mixture sum w_k mu_k of disintegrated measures sharing grid, law and
/// rho_B (e.g. rotations of one measure); exact on the angular weights.
DisintegratedMeasure mixture_measure(const std::vector<DisintegratedMeasure>& mus,
                                     const std::vector<double>& weights);

/// Rotate a planar measure by k quarter turns (index shift, exact).
DisintegratedMeasure rotate_measure_quarter(const DisintegratedMeasure& mu, int k);

/// Closure battery (n = 2): the weighted mixture, the pushforward under the
/// invertible linear map T (row-major 2x2, probes pulled back exactly), and
/// q' > q monotonicity all re-run the complemented-BM probe battery.
std::vector<IneqReport> closure_suite(const std::vector<DisintegratedMeasure>& mus,
                                      const std::vector<double>& weights,
                                      const std::array<double, 4>& T, double q,
                                      double q_prime, const CheckOptions& opt = {});

struct ProfileSearchResult {
    double best_boundary = 0.0;
    std::vector<double> best_rho; // radial values of the best hole shape
    double bound = 0.0;           // -(1/q) mu(complement K)^q v^(1-q)
    double gap = 0.0;             // best_boundary - bound (>= -tol expected)
    double fourier_tail = 0.0;    // largest non-constant log-Fourier coefficient
    double mass = 0.0;            // achieved mu(complement), equals v by rescale
    bool converged = false;
    int evaluations = 0;
};

/// Searches for isoperimetric minimizers among co-stars with log-Fourier
/// radial profiles at fixed complement mass v (enforced by q-homogeneous
/// rescale); Nelder-Mead over the 2*degree coefficients.
ProfileSearchResult profile_search(const DisintegratedMeasure& mu, const ConvexBody& K,
                                   double v, int fourier_degree, int budget,
                                   std::uint64_t seed = 0x51ed270b0f4a92c1ULL);

/// Battery samplers shared by tests: convex bodies are discs, origin-interior
/// boxes, ellipse-inscribed polygons and mild Fourier stars; plain stars may
/// be non-convex. Deterministic in the Rng state.
ConvexBody random_convex_body(const GridPtr& grid, Rng& rng);
StarBody random_star_body(const GridPtr& grid, Rng& rng, bool allow_nonconvex = true);

/// Short human-readable body description for witnesses.
std::string describe_body(const StarBody& S);
std::string describe_body(const ConvexBody& K);

} // namespace geomineq
