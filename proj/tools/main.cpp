#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qqm/scenario.hpp"

// Scenario-driven front end.  Exit codes: 0 all selected checks passed,
// 1 at least one check failed its tolerance, 2 operational error (bad file,
// missing directory, non-finite state, refused precondition).

namespace {

namespace fs = std::filesystem;

void print_report_line(const std::string& scenario, const qqm::ResidualReport& rep) {
    std::printf("%-28s %-22s %-5s n=%-5zu max=%-13.6g tol=%-10.4g %s\n", scenario.c_str(),
                rep.identity.c_str(), rep.variant.c_str(), rep.grid_n, rep.max_residual,
                rep.tolerance, rep.pass ? "PASS" : "FAIL");
}

// Runs one scenario file, writes its artifacts, prints one line per check.
// Returns false when a check failed.
bool run_one(const std::string& path, const std::string& out_dir, double tol_scale) {
    const qqm::Scenario scenario = qqm::parse_scenario(path);
    const qqm::ScenarioResult result = qqm::run_scenario(scenario, tol_scale);

    fs::create_directories(out_dir);
    const std::string base = out_dir + "/" + scenario.name;
    qqm::write_observables_csv(base + "_observables.csv", result.observables);
    qqm::write_reports_json(base + "_reports.json", result.reports);
    if (scenario.outputs.dump_fields) {
        qqm::write_field_csv(result.trajectory.states.back(), base + "_fields.csv");
    }

    for (const qqm::ResidualReport& rep : result.reports) {
        print_report_line(scenario.name, rep);
    }
    return result.all_passed;
}

int cmd_run(const std::string& config, const std::string& out_dir, double tol_scale) {
    return run_one(config, out_dir, tol_scale) ? 0 : 1;
}

int cmd_verify(const std::string& scenario_dir, const std::string& out_dir, double tol_scale) {
    if (!fs::is_directory(scenario_dir)) {
        std::fprintf(stderr, "verify: scenario directory not found: %s\n", scenario_dir.c_str());
        return 2;
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(scenario_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path().string());
        }
    }
    if (files.empty()) {
        std::fprintf(stderr, "verify: no scenario files in %s\n", scenario_dir.c_str());
        return 2;
    }
    std::sort(files.begin(), files.end());

    std::size_t failures = 0;
    std::size_t checks = 0;
    for (const std::string& file : files) {
        const qqm::Scenario scenario = qqm::parse_scenario(file);
        const qqm::ScenarioResult result = qqm::run_scenario(scenario, tol_scale);
        fs::create_directories(out_dir);
        const std::string base = out_dir + "/" + scenario.name;
        qqm::write_observables_csv(base + "_observables.csv", result.observables);
        qqm::write_reports_json(base + "_reports.json", result.reports);
        if (scenario.outputs.dump_fields) {
            qqm::write_field_csv(result.trajectory.states.back(), base + "_fields.csv");
        }
        for (const qqm::ResidualReport& rep : result.reports) {
            print_report_line(scenario.name, rep);
            ++checks;
            if (!rep.pass) ++failures;
        }
    }

    std::vector<qqm::ResidualReport> convergence;
    const qqm::StudyResult dx = qqm::run_dx_order_study();
    const qqm::StudyResult dt = qqm::run_dt_order_study();
    for (const qqm::StudyResult* study : {&dx, &dt}) {
        for (const qqm::ResidualReport& rep : study->rows) convergence.push_back(rep);
        convergence.push_back(study->verdict);
        std::printf("%-28s %-22s %-5s order=%-8.4f window=%-8.4g %s\n", "convergence",
                    study->verdict.identity.c_str(), study->verdict.variant.c_str(),
                    study->fit.fitted_order, study->verdict.tolerance,
                    study->verdict.pass ? "PASS" : "FAIL");
        ++checks;
        if (!study->verdict.pass) ++failures;
    }
    fs::create_directories(out_dir);
    qqm::write_reports_json(out_dir + "/convergence_reports.json", convergence);

    std::printf("verify: %zu checks, %zu failed\n", checks, failures);
    return failures == 0 ? 0 : 1;
}

int cmd_dump(const std::string& scenario_dir, const std::string& name) {
    const std::string path = scenario_dir + "/" + name + ".json";
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "dump-scenario: cannot open %s\n", path.c_str());
        return 2;
    }
    std::cout << in.rdbuf();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternionic wave-equation runner and identity checker"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::string scenario_dir = "scenarios";
    double tol_scale = 1.0;

    CLI::App* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("--config", config, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default .)");
    run->add_option("--tol-scale", tol_scale, "multiply per-check tolerances");

    CLI::App* verify =
        app.add_subcommand("verify", "run every bundled scenario plus convergence studies");
    verify->add_option("--out", out_dir, "output directory (default .)");
    verify->add_option("--scenarios", scenario_dir, "scenario directory (default scenarios)");
    verify->add_option("--tol-scale", tol_scale, "multiply per-check tolerances");

    std::string dump_name;
    CLI::App* dump = app.add_subcommand("dump-scenario", "print a bundled scenario");
    dump->add_option("name", dump_name, "scenario name")->required();
    dump->add_option("--scenarios", scenario_dir, "scenario directory (default scenarios)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config, out_dir, tol_scale);
        if (verify->parsed()) return cmd_verify(scenario_dir, out_dir, tol_scale);
        return cmd_dump(scenario_dir, dump_name);
    } catch (const qqm::HermiticityError& e) {
        std::fprintf(stderr, "refused: %s\n", e.what());
        return 2;
    } catch (const qqm::NanAbortError& e) {
        std::fprintf(stderr, "aborted: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
