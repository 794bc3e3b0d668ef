#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wasep/initial_conditions.hpp"
#include "wasep/lattice.hpp"
#include "wasep/scaling.hpp"

namespace wasep {

enum class ExperimentKind {
    proposition,
    ordering,
    equilibrium,
    heat_kernel,
    epsilon_scan,
    lipschitz,
    she,
    oracle,
};

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_kind_from(const std::string& name);

struct SheConfig {
    double dx = 0.05;
    double dt = 1e-3;
    double extent = 6.0;  // half-width X; auto mode widens to 6 sqrt(T)
    std::int64_t paths = 10000;
    std::string ic = "delta";     // delta | brownian | brownian-plus-phi
    std::string mode = "kernel";  // kernel | coupled
    bool trajectories = false;    // dump (t, x, Z, H) for the first path
};

// Declarative description of one experiment. Parsed from a JSON document
// with a "schema": "v1" header; every validation failure is collected so a
// bad config reports all offending keys at once.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::proposition;
    std::vector<double> epsilons{0.1};
    double t_macro = 1.0;

    double a = -1.0;
    double b = 1.0;
    bool auto_extent = true;
    std::int64_t lattice_extent = 0;
    Topology topology = Topology::reflecting_segment;

    std::int64_t runs = 100;
    std::uint64_t root_seed = 1;
    std::int64_t sample_times = 10;   // intermediate checks for proposition
    std::uint64_t hook_stride = 1;    // ordering hook stride
    std::int64_t samples = 100000;    // MC samples (equilibrium, heat-kernel)
    int n_sites = 8;                  // oracle / equilibrium lattice size
    double t_micro = 5.0;
    std::vector<double> points{0.0, 0.5, -0.5, 1.0, -1.0};
    std::optional<ProfileFunction> phi;
    double lipschitz_m = 0.5;
    std::int64_t grid_points = 9;
    std::string oracle_initial = "product";  // product | sector | point
    double oracle_density = 0.5;
    int oracle_particles = 4;
    std::uint64_t oracle_state = 0;
    SheConfig she;

    std::vector<double> observable_points;  // optional CSV dump of observables
    // Optional cross-check of the coupled-SHE TV median against a particle
    // epsilon-scan median.
    std::optional<double> compare_tv_median;
    bool write_csv = true;
    std::string out_dir = "out";

    nlohmann::json thresholds;  // resolved: defaults overlaid with the config
    nlohmann::json raw;         // original document, echoed into reports

    static ExperimentConfig from_json(const nlohmann::json& doc);
    nlohmann::json echo() const;

    // Buffer rule for "auto" extent: L = ceil(max(|a|,|b|)/eps + 3 t/eps^2),
    // justified by unit information-propagation speed.
    std::int64_t resolve_extent(double epsilon) const;
    WindowSpec window_for(double epsilon) const;

    double threshold(const std::string& key) const {
        return thresholds.at(key).get<double>();
    }
};

nlohmann::json default_thresholds(ExperimentKind kind);

// Parse a profile-function description, e.g.
//   {"kind":"linear","slope":0.5}
//   {"kind":"sine","amplitude":0.3,"period":2.0}
//   {"kind":"piecewise","breakpoints":[[-1,0],[0,0.5],[1,0]]}
ProfileFunction profile_function_from_json(const nlohmann::json& doc);
nlohmann::json profile_function_to_json(const ProfileFunction& f);

}  // namespace wasep
