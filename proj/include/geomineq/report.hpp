#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "geomineq/common.hpp"

namespace geomineq {

enum class Orientation { GE, LE };

/// assert: a failure is a defect and must fail the run.
/// diagnostic: recorded and reported, but never affects exit status; used for
/// checks whose claim is known to hold only conditionally.
enum class CheckMode { assert_mode, diagnostic };

/// Outcome of one verified inequality, claim `lhs >= rhs` (GE) or
/// `lhs <= rhs` (LE). Slack is always lhs - rhs; oriented_slack flips sign for
/// LE so that pass <=> oriented_slack >= -tol * scale with
/// scale = max(|lhs|, |rhs|, 1e-12). Infinite values compare by convention:
/// equal infinities count as equality, an infinite favourable side passes.
struct IneqReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;          // lhs - rhs (NaN when both sides are +inf)
    double oriented_slack = 0.0; // >= 0 means the claim holds with margin
    double rel_tolerance = 0.0;
    bool pass = false;
    Orientation orientation = Orientation::GE;
    CheckMode mode = CheckMode::assert_mode;
    std::string path;    // evaluation route: closed_form, quadrature, voxel, ...
    std::string witness; // inputs pinned enough to replay the check
    std::string notes;
};

inline IneqReport make_report(std::string name, double lhs, double rhs,
                              Orientation orientation, double rel_tolerance,
                              CheckMode mode = CheckMode::assert_mode,
                              std::string path = {}, std::string witness = {},
                              std::string notes = {}) {
    IneqReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.orientation = orientation;
    r.rel_tolerance = rel_tolerance;
    r.mode = mode;
    r.path = std::move(path);
    r.witness = std::move(witness);
    r.notes = std::move(notes);

    const bool both_pos_inf = (lhs == kInf && rhs == kInf);
    const bool both_neg_inf = (lhs == -kInf && rhs == -kInf);
    if (both_pos_inf || both_neg_inf) {
        r.slack = std::numeric_limits<double>::quiet_NaN();
        r.oriented_slack = 0.0;
        r.pass = true;
        return r;
    }
    r.slack = lhs - rhs;
    r.oriented_slack = (orientation == Orientation::GE) ? r.slack : -r.slack;
    if (r.oriented_slack == kInf) {
        r.pass = true;
        return r;
    }
    if (r.oriented_slack == -kInf || std::isnan(r.oriented_slack)) {
        r.pass = false;
        return r;
    }
    // Both sides are finite here: infinite oriented slack was handled above.
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
    r.pass = r.oriented_slack >= -rel_tolerance * scale;
    return r;
}

inline const char* orientation_str(Orientation o) {
    return o == Orientation::GE ? ">=" : "<=";
}

inline const char* mode_str(CheckMode m) {
    return m == CheckMode::assert_mode ? "assert" : "diagnostic";
}

} // namespace geomineq
