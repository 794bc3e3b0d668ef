#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli_output.txt";
    const std::string cmd =
        std::string(WASEP_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::string output((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, output};
}

fs::path fresh_tmp(const std::string& name) {
    const auto dir = fs::path(WASEP_TEST_TMPDIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const json& doc) {
    const auto p = dir / "config.json";
    std::ofstream out(p);
    out << doc.dump(2);
    return p;
}

json load(const fs::path& p) {
    std::ifstream in(p);
    json doc;
    in >> doc;
    return doc;
}

}  // namespace

TEST_CASE("validate accepts good configs and names offending keys") {
    const auto dir = fresh_tmp("cli_validate");
    const auto good = write_config(
        dir, {{"schema", "v1"}, {"experiment", "proposition"}, {"epsilon", 0.25}});
    auto res = run_cli("validate --config " + good.string(), dir);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("ok") != std::string::npos);

    const auto bad = write_config(dir, {{"schema", "v1"},
                                        {"experiment", "proposition"},
                                        {"epsilon", 0.25},
                                        {"window", {{"a", 1.0}, {"b", -1.0}}}});
    res = run_cli("validate --config " + bad.string(), dir);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("window.a") != std::string::npos);
}

TEST_CASE("run is reproducible, replay re-executes a run, exit codes signal verdicts") {
    const auto dir = fresh_tmp("cli_run");
    const json doc{{"schema", "v1"},
                   {"experiment", "proposition"},
                   {"epsilon", 0.25},
                   {"t_macro", 0.5},
                   {"runs", 5},
                   {"sample_times", 2},
                   {"root_seed", 4242},
                   {"output", {{"dir", (dir / "out1").string()}}}};
    const auto cfg_path = write_config(dir, doc);

    auto res = run_cli("run --config " + cfg_path.string() + " --jobs 2", dir);
    CHECK(res.exit_code == 0);

    res = run_cli("run --config " + cfg_path.string() + " --out " +
                      (dir / "out2").string() + " --jobs 1",
                  dir);
    CHECK(res.exit_code == 0);

    const auto r1 = load(dir / "out1" / "report.json");
    auto r2 = load(dir / "out2" / "report.json");
    json a = r1, b = r2;
    a.erase("wall_clock_seconds");
    b.erase("wall_clock_seconds");
    CHECK(a == b);

    // CSV datasets are byte-identical too.
    std::ifstream c1(dir / "out1" / "proposition.csv"), c2(dir / "out2" / "proposition.csv");
    const std::string s1((std::istreambuf_iterator<char>(c1)),
                         std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(c2)),
                         std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());

    // The scan CSV identity column: count * 2 sqrt(eps) equals the TV column
    // is covered by suite tests; here check replay round trip via the CLI.
    res = run_cli("replay --report " + (dir / "out1" / "report.json").string() +
                      " --run-index 3",
                  dir);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("matches") != std::string::npos);

    // Seed override changes the numbers.
    res = run_cli("run --config " + cfg_path.string() + " --out " +
                      (dir / "out3").string() + " --seed-override 777",
                  dir);
    CHECK(res.exit_code == 0);
    auto r3 = load(dir / "out3" / "report.json");
    r3.erase("wall_clock_seconds");
    CHECK(a != r3);
}

TEST_CASE("failing verdict maps to exit code 2") {
    const auto dir = fresh_tmp("cli_fail");
    // Absurdly tight kernel tolerance at coarse epsilon: deterministic fail.
    const json doc{{"schema", "v1"},
                   {"experiment", "heat-kernel"},
                   {"epsilon", 0.2},
                   {"t_macro", 0.5},
                   {"samples", 100},
                   {"points", {0.0}},
                   {"thresholds", {{"relative_tolerance", 1e-9}, {"se_multiplier", 0.01}}},
                   {"root_seed", 5},
                   {"output", {{"dir", (dir / "out").string()}}}};
    const auto cfg_path = write_config(dir, doc);
    const auto res = run_cli("run --config " + cfg_path.string(), dir);
    CHECK(res.exit_code == 2);
}

TEST_CASE("usage errors map to exit code 1") {
    const auto dir = fresh_tmp("cli_usage");
    auto res = run_cli("run --config /no/such/file.json", dir);
    CHECK(res.exit_code == 1);
    res = run_cli("frobnicate", dir);
    CHECK(res.exit_code != 0);
}

TEST_CASE("bench subcommand reports throughput") {
    const auto dir = fresh_tmp("cli_bench");
    const auto res = run_cli("bench --sites 1001 --events 300000 --replicas 1", dir);
    CHECK(res.exit_code == 0);
    const auto doc = json::parse(res.output);
    CHECK(doc.at("sites").get<int>() == 1001);
    CHECK(doc.at("events").get<std::int64_t>() > 0);
    CHECK(doc.at("events_per_second").get<double>() > 1e6);
}
