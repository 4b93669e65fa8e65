// Command-line front end: runs verification scenarios and emits reports.
// Exit code 0: every asserted check passed. 1: at least one asserted check
// failed. 2: the scenario could not be run (bad file, schema violation,
// or a checker hypothesis violation).
#include "geomineq/scenario.hpp"
#include "geomineq/version.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

int emit_reports(const geomineq::ScenarioReport& report, const std::string& out_path,
                 const std::string& csv_path) {
    const std::string doc = geomineq::report_json(report);
    if (out_path.empty()) {
        std::cout << doc;
    } else {
        if (int rc = write_file(out_path, doc)) return rc;
        std::printf("%d passed, %d failed, %d diagnostics -> %s\n", report.summary.passed,
                    report.summary.failed, report.summary.diagnostics, out_path.c_str());
    }
    if (!csv_path.empty())
        if (int rc = write_file(csv_path, geomineq::report_csv(report))) return rc;
    return geomineq::exit_code(report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geomineq: sharp inequality verification for weighted radial measures"};
    app.set_version_flag("--version", std::string(geomineq::kVersion));
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string csv_path;
    double oracle_h = 0.00390625;
    int grid = 4096;
    bool dump_masks = false;

    CLI::App* verify = app.add_subcommand("verify", "run every check in a scenario file");
    verify->add_option("scenario", scenario_path, "scenario JSON file")->required();
    verify->add_option("--out", out_path, "write the JSON report here instead of stdout");
    verify->add_option("--csv", csv_path, "also write a CSV summary here");
    CLI::Option* opt_h =
        verify->add_option("--oracle-h", oracle_h, "override the voxel oracle cell size");
    CLI::Option* opt_grid =
        verify->add_option("--grid", grid, "override the direction grid resolution");
    verify->add_flag("--dump-masks", dump_masks, "write voxel masks of named bodies as PGM");

    std::string fixture_dir;
    CLI::App* fixtures =
        app.add_subcommand("fixtures", "write the bundled scenarios and their expected CSVs");
    fixtures->add_option("dir", fixture_dir, "output directory")->required();

    std::string profile_path;
    std::string profile_out;
    std::string profile_csv;
    CLI::App* profile =
        app.add_subcommand("profile", "run only the profile_search checks of a scenario");
    profile->add_option("scenario", profile_path, "scenario JSON file")->required();
    profile->add_option("--out", profile_out, "write the JSON report here instead of stdout");
    profile->add_option("--csv", profile_csv, "also write a CSV summary here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            geomineq::ScenarioOverrides ov;
            if (opt_h->count() > 0) ov.oracle_h = oracle_h;
            if (opt_grid->count() > 0) ov.grid = grid;
            ov.dump_masks = dump_masks;
            return emit_reports(geomineq::run_scenario_file(scenario_path, ov), out_path,
                                csv_path);
        }
        if (fixtures->parsed()) {
            const auto names = geomineq::emit_fixtures(fixture_dir);
            for (const auto& name : names)
                std::printf("%s/%s.json\n", fixture_dir.c_str(), name.c_str());
            return 0;
        }
        geomineq::ScenarioOverrides ov;
        ov.only_checker = "profile_search";
        return emit_reports(geomineq::run_scenario_file(profile_path, ov), profile_out,
                            profile_csv);
    } catch (const geomineq::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
