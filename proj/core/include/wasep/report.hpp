#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace wasep {

// One CSV dataset emitted next to a report, with a declared column order.
struct CsvTable {
    std::string name;  // file stem, e.g. "proposition"
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Deterministic cell formatting ("%.17g" for reals).
std::string csv_cell(double v);
std::string csv_cell(std::int64_t v);
std::string csv_cell(std::uint64_t v);
std::string csv_cell(bool v);

// Everything a suite hands back to the runner.
struct SuiteOutput {
    nlohmann::json body;  // suite-specific report sections
    bool pass = false;
    std::vector<CsvTable> tables;
    std::vector<std::string> plot_hints;  // gnuplot one-liners for PLOTS.md
};

// Writes report JSON plus CSV tables plus PLOTS.md under out_dir. Reports
// are append-only: an existing report.json is never rewritten, the next
// write gets a -2, -3, ... suffix. Returns the report path.
std::filesystem::path write_report_files(const std::filesystem::path& out_dir,
                                         const nlohmann::json& report,
                                         const std::vector<CsvTable>& tables,
                                         const std::vector<std::string>& plot_hints);

// On abort, partial outputs land in out_dir/quarantine with an error note.
void write_quarantine(const std::filesystem::path& out_dir, const std::string& what,
                      const nlohmann::json& partial);

// Bitwise comparison of two reports ignoring the wall-clock field.
bool reports_equal_modulo_wallclock(nlohmann::json a, nlohmann::json b);

}  // namespace wasep
