#include "wasep/experiment.hpp"

#include <chrono>

#include "wasep/suites.hpp"

namespace wasep {

using nlohmann::json;

RunOutcome run_experiment(const ExperimentConfig& config, int jobs,
                          const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    SuiteOutput suite;
    try {
        suite = suites::dispatch(config, jobs);
    } catch (const std::exception& e) {
        if (!out_dir.empty())
            write_quarantine(out_dir, e.what(), json{{"config", config.echo()}});
        throw;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report;
    report["schema"] = "v1";
    report["suite"] = to_string(config.experiment);
    report["config"] = config.echo();
    report["seeds"] = {
        {"root", config.root_seed},
        {"derivation",
         "run_seed = splitmix64(root + (index+1) * 0x9e3779b97f4a7c15); substreams "
         "events/uniforms/initial/noise/brownian = splitmix64(run_seed + (k+1) * "
         "0x9e3779b97f4a7c15), k = 0..4"}};
    for (auto it = suite.body.begin(); it != suite.body.end(); ++it)
        report[it.key()] = it.value();
    report["verdict"] = suite.pass ? "pass" : "fail";
    report["tool_version"] = k_tool_version;
    report["wall_clock_seconds"] = wall;

    RunOutcome outcome;
    outcome.report = report;
    outcome.pass = suite.pass;
    if (!out_dir.empty()) {
        outcome.report_path = write_report_files(
            out_dir, report, config.write_csv ? suite.tables : std::vector<CsvTable>{},
            suite.plot_hints);
    }
    return outcome;
}

ExperimentConfig config_from_report(const json& report) {
    if (!report.contains("config") || !report.at("config").contains("input"))
        throw config_error({"report: missing config echo"});
    return ExperimentConfig::from_json(report.at("config").at("input"));
}

bool replay_run(const json& report, std::int64_t run_index, json* fresh_record) {
    const auto config = config_from_report(report);
    auto fresh = suites::replay_single(config, run_index);
    if (!fresh) {
        throw config_error(
            {"replay: suite '" + std::string(to_string(config.experiment)) +
             "' has no per-run records; re-run the full config to reproduce "
             "aggregates bitwise"});
    }
    if (fresh_record) *fresh_record = *fresh;
    if (!report.contains("records"))
        throw config_error({"replay: report has no records array"});
    for (const auto& rec : report.at("records")) {
        if (rec.at("run").get<std::int64_t>() == run_index) return rec == *fresh;
    }
    throw config_error({"replay: run index " + std::to_string(run_index) +
                        " not present in the report"});
}

}  // namespace wasep
