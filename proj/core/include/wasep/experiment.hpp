#pragma once

#include <filesystem>
#include <string>

#include "wasep/config.hpp"
#include "wasep/report.hpp"

namespace wasep {

inline constexpr const char* k_tool_version = "0.1.0";

struct RunOutcome {
    nlohmann::json report;
    bool pass = false;
    std::filesystem::path report_path;  // empty when nothing was written
};

// Executes the configured suite, assembles the RunReport, and (unless
// out_dir is empty) writes report JSON, CSV datasets and PLOTS.md. On an
// abort mid-suite, partial context goes to out_dir/quarantine and the
// exception propagates.
RunOutcome run_experiment(const ExperimentConfig& config, int jobs,
                          const std::filesystem::path& out_dir);

// Re-execute one run recorded in a report and compare against the stored
// per-run record. Returns true when the record reproduces exactly. Throws
// config_error for suites without per-run records.
bool replay_run(const nlohmann::json& report, std::int64_t run_index,
                nlohmann::json* fresh_record = nullptr);

// Reconstruct the parsed config from a report's config echo.
ExperimentConfig config_from_report(const nlohmann::json& report);

}  // namespace wasep
