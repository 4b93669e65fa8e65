#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geomineq/report.hpp"

namespace geomineq {

/// Configuration or schema problem in a scenario document; maps to process
/// exit code 2. The pointer is a JSON pointer to the offending node.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string pointer, const std::string& message)
        : std::runtime_error(pointer.empty() ? message : pointer + ": " + message),
          pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

struct ScenarioSummary {
    int passed = 0;      // checks with pass == true
    int failed = 0;      // assert-mode checks with pass == false (drive exit 1)
    int diagnostics = 0; // diagnostic-mode checks with pass == false (never do)
};

/// Result of one scenario run. ids is parallel to checks: entries that expand
/// to several reports (closure) repeat their id.
struct ScenarioReport {
    std::string version;
    std::string digest; // FNV-1a 64 of the scenario text, hex
    std::vector<std::string> ids;
    std::vector<IneqReport> checks;
    ScenarioSummary summary;
    double total_ms = 0.0;
};

/// Command-line overrides applied on top of the scenario document.
struct ScenarioOverrides {
    std::optional<int> grid;        // direction-grid resolution
    std::optional<double> oracle_h; // voxel cell size
    bool dump_masks = false;        // write PGM masks for voxel-path checks
    std::string dump_dir = ".";
    std::optional<std::string> only_checker; // run only entries of this kind
};

/// Parses, validates and runs a scenario. Checks execute in a small work
/// pool; reports are assembled in declared order, so a fixed scenario is
/// deterministic modulo the timing field. Throws ScenarioError on schema or
/// configuration problems (including checker precondition violations).
ScenarioReport run_scenario_text(const std::string& text,
                                 const ScenarioOverrides& overrides = {});
ScenarioReport run_scenario_file(const std::string& path,
                                 const ScenarioOverrides& overrides = {});

/// 0 when every assert-mode check passed, 1 otherwise. Diagnostic-mode
/// failures never affect the exit code.
int exit_code(const ScenarioReport& r);

/// JSON serialization; doubles print shortest-round-trip, non-finite values
/// as the strings "inf"/"-inf"/"nan". with_timing=false drops the timing
/// block for byte-identical comparisons.
std::string report_json(const ScenarioReport& r, bool with_timing = true);

/// CSV side-channel, columns: check,name,lhs,rhs,slack,pass.
std::string report_csv(const ScenarioReport& r);

/// Bundled scenario documents as {name, text} pairs.
const std::vector<std::pair<std::string, std::string>>& bundled_scenarios();

/// Writes every bundled scenario to dir as <name>.json plus a computed
/// <name>.expected.csv; returns the scenario names. Re-running a written
/// scenario reproduces the CSV values (closed-form paths to 1e-9).
std::vector<std::string> emit_fixtures(const std::string& dir);

} // namespace geomineq
