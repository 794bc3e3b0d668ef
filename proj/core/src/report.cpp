#include "wasep/report.hpp"

#include <cstdio>
#include <fstream>

#include "wasep/errors.hpp"

namespace wasep {

namespace fs = std::filesystem;

std::string csv_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(std::int64_t v) { return std::to_string(v); }
std::string csv_cell(std::uint64_t v) { return std::to_string(v); }
std::string csv_cell(bool v) { return v ? "1" : "0"; }

namespace {

fs::path unique_path(const fs::path& dir, const std::string& stem,
                     const std::string& ext) {
    fs::path p = dir / (stem + ext);
    for (int k = 2; fs::exists(p); ++k) {
        p = dir / (stem + "-" + std::to_string(k) + ext);
    }
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw error("failed writing " + path.string());
}

std::string render_csv(const CsvTable& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) s += ',';
        s += t.columns[i];
    }
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += row[i];
        }
        s += '\n';
    }
    return s;
}

}  // namespace

fs::path write_report_files(const fs::path& out_dir, const nlohmann::json& report,
                            const std::vector<CsvTable>& tables,
                            const std::vector<std::string>& plot_hints) {
    fs::create_directories(out_dir);
    const fs::path report_path = unique_path(out_dir, "report", ".json");
    write_text(report_path, report.dump(2) + "\n");

    for (const auto& t : tables) {
        const fs::path p = unique_path(out_dir, t.name, ".csv");
        write_text(p, render_csv(t));
    }

    if (!plot_hints.empty()) {
        std::string md = "# Suggested plots\n\n";
        md += "Columnar CSV files in this directory are gnuplot-ready, e.g.:\n\n";
        for (const auto& h : plot_hints) {
            md += "```\n" + h + "\n```\n";
        }
        const fs::path p = unique_path(out_dir, "PLOTS", ".md");
        write_text(p, md);
    }
    return report_path;
}

void write_quarantine(const fs::path& out_dir, const std::string& what,
                      const nlohmann::json& partial) {
    const fs::path qdir = out_dir / "quarantine";
    fs::create_directories(qdir);
    nlohmann::json note;
    note["error"] = what;
    note["partial"] = partial;
    write_text(unique_path(qdir, "aborted", ".json"), note.dump(2) + "\n");
}

bool reports_equal_modulo_wallclock(nlohmann::json a, nlohmann::json b) {
    a.erase("wall_clock_seconds");
    b.erase("wall_clock_seconds");
    return a == b;
}

}  // namespace wasep
