// Command-line front end: run/validate/replay experiment configs and a
// built-in event-loop benchmark. Exit codes: 0 pass, 1 usage/config error,
// 2 suite verdict fail (or replay mismatch).

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wasep/dynamics.hpp"
#include "wasep/experiment.hpp"
#include "wasep/initial_conditions.hpp"
#include "wasep/parallel.hpp"
#include "wasep/suites.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw wasep::error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw wasep::config_error({std::string("JSON parse error: ") + e.what()});
    }
    return doc;
}

int cmd_run(const std::string& config_path, std::string out_dir, int jobs,
            std::optional<std::uint64_t> seed_override) {
    auto doc = load_json(config_path);
    auto config = wasep::ExperimentConfig::from_json(doc);
    if (seed_override) {
        config.root_seed = *seed_override;
        config.raw["root_seed"] = *seed_override;  // echo reflects the override
    }
    if (out_dir.empty()) out_dir = config.out_dir;
    const auto outcome = wasep::run_experiment(config, jobs, out_dir);
    std::cout << "suite:   " << to_string(config.experiment) << "\n"
              << "verdict: " << (outcome.pass ? "pass" : "fail") << "\n"
              << "report:  " << outcome.report_path.string() << "\n";
    return outcome.pass ? 0 : 2;
}

int cmd_validate(const std::string& config_path) {
    auto doc = load_json(config_path);
    wasep::ExperimentConfig::from_json(doc);
    std::cout << "ok\n";
    return 0;
}

int cmd_replay(const std::string& report_path, std::int64_t run_index) {
    const auto report = load_json(report_path);
    json fresh;
    const bool match = wasep::replay_run(report, run_index, &fresh);
    std::cout << fresh.dump(2) << "\n"
              << (match ? "replay matches the stored record\n"
                        : "REPLAY MISMATCH against the stored record\n");
    return match ? 0 : 2;
}

int cmd_bench(std::int64_t sites, std::int64_t events, int replicas,
              std::uint64_t seed) {
    using namespace wasep;
    const auto scaling = scaling_constants(0.1);
    const std::int64_t extent = (sites - 1) / 2;
    WindowSpec window{-1.0, 1.0, extent, Topology::reflecting_segment};
    const auto uniforms = draw_uniform_field(derive_seed(seed, 1), window.n_sites(),
                                             window.lattice_extent);
    CoupledEnsemble ensemble(
        EventStream::for_window(derive_seed(seed, 0), scaling, window));
    for (int r = 0; r < replicas; ++r) {
        ensemble.add_replica(
            "r" + std::to_string(r),
            product_measure(
                constant_profile(0.5, window.n_sites(), window.lattice_extent),
                uniforms, window.topology));
    }

    // Warm-up, then timed batch. Events arrive at rate #bonds per unit time.
    const double batch_duration =
        static_cast<double>(events) / static_cast<double>(2 * extent);
    ensemble.evolve(batch_duration * 0.02);
    const auto before = ensemble.events_applied();
    const auto start = std::chrono::steady_clock::now();
    ensemble.evolve(batch_duration);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const auto applied = ensemble.events_applied() - before;

    json out{{"sites", sites},
             {"replicas", replicas},
             {"events", applied},
             {"seconds", seconds},
             {"events_per_second", static_cast<double>(applied) / seconds}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled WASEP simulator and verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_path;
    int jobs = wasep::default_jobs();
    std::optional<std::uint64_t> seed_override;
    std::int64_t run_index = 0;
    std::int64_t bench_sites = 10001;
    std::int64_t bench_events = 10000000;
    int bench_replicas = 1;
    std::uint64_t bench_seed = 1;

    auto* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out", out_dir, "output directory (default: config output.dir)");
    run->add_option("--jobs", jobs, "parallel runs");
    std::uint64_t seed_val = 0;
    auto* seed_opt = run->add_option("--seed-override", seed_val, "replace root_seed");

    auto* validate = app.add_subcommand("validate", "check a config against the schema");
    validate->add_option("--config", config_path, "config JSON path")->required();

    auto* replay = app.add_subcommand("replay", "re-execute one run from a report");
    replay->add_option("--report", report_path, "report JSON path")->required();
    replay->add_option("--run-index", run_index, "run index to replay")->required();

    auto* bench = app.add_subcommand("bench", "event-loop throughput benchmark");
    bench->add_option("--sites", bench_sites, "lattice sites (default 10001)");
    bench->add_option("--events", bench_events, "events to apply (default 1e7)");
    bench->add_option("--replicas", bench_replicas, "replicas sharing the stream");
    bench->add_option("--seed", bench_seed, "stream seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (seed_opt->count() > 0) seed_override = seed_val;
            return cmd_run(config_path, out_dir, jobs, seed_override);
        }
        if (validate->parsed()) return cmd_validate(config_path);
        if (replay->parsed()) return cmd_replay(report_path, run_index);
        if (bench->parsed())
            return cmd_bench(bench_sites, bench_events, bench_replicas, bench_seed);
    } catch (const wasep::config_error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
