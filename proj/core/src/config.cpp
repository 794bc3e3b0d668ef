#include "wasep/config.hpp"

#include <cmath>

namespace wasep {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::proposition: return "proposition";
        case ExperimentKind::ordering: return "ordering";
        case ExperimentKind::equilibrium: return "equilibrium";
        case ExperimentKind::heat_kernel: return "heat-kernel";
        case ExperimentKind::epsilon_scan: return "epsilon-scan";
        case ExperimentKind::lipschitz: return "lipschitz";
        case ExperimentKind::she: return "she";
        case ExperimentKind::oracle: return "oracle";
    }
    return "?";
}

std::optional<ExperimentKind> experiment_kind_from(const std::string& name) {
    for (auto kind : {ExperimentKind::proposition, ExperimentKind::ordering,
                      ExperimentKind::equilibrium, ExperimentKind::heat_kernel,
                      ExperimentKind::epsilon_scan, ExperimentKind::lipschitz,
                      ExperimentKind::she, ExperimentKind::oracle}) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

json default_thresholds(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::proposition:
        case ExperimentKind::ordering:
            return json::object();  // exact checks, zero tolerance
        case ExperimentKind::equilibrium:
            return {{"tv_limit", 0.01}, {"invariance_limit", 1e-10}};
        case ExperimentKind::heat_kernel:
            return {{"relative_tolerance", 0.05},
                    {"se_multiplier", 2.0},
                    {"semigroup_se_multiplier", 4.0}};
        case ExperimentKind::epsilon_scan:
            return {{"median_drift_limit", 0.20}, {"q90_growth_limit", 0.50}};
        case ExperimentKind::lipschitz:
            return {{"stat_pass_fraction", 0.95},
                    {"slack_sqrt_eps_coeff", 2.0},
                    {"slack_se_coeff", 4.0}};
        case ExperimentKind::she:
            return {{"relative_tolerance", 0.05},
                    {"se_multiplier", 2.0},
                    {"zero_noise_tolerance", 1e-3},
                    {"clamp_fraction_limit", 1e-6},
                    {"tv_median_agreement", 0.30}};
        case ExperimentKind::oracle:
            return {{"invariance_limit", 1e-10},
                    {"row_sum_limit", 1e-12},
                    {"prob_sum_limit", 1e-12}};
    }
    return json::object();
}

ProfileFunction profile_function_from_json(const json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "linear") return ProfileFunction::linear(doc.at("slope").get<double>());
    if (kind == "sine")
        return ProfileFunction::sine(doc.at("amplitude").get<double>(),
                                     doc.at("period").get<double>());
    if (kind == "piecewise") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : doc.at("breakpoints")) {
            pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
        return ProfileFunction::piecewise_linear(std::move(pts));
    }
    throw config_error({"phi.kind must be one of linear, sine, piecewise"});
}

json profile_function_to_json(const ProfileFunction& f) {
    switch (f.kind()) {
        case ProfileFunction::Kind::linear:
            return {{"kind", "linear"}, {"slope", f.slope()}};
        case ProfileFunction::Kind::sine:
            return {{"kind", "sine"}, {"amplitude", f.amplitude()}, {"period", f.period()}};
        case ProfileFunction::Kind::piecewise_linear: {
            json pts = json::array();
            for (const auto& [s, v] : f.breakpoints()) pts.push_back({s, v});
            return {{"kind", "piecewise"}, {"breakpoints", pts}};
        }
    }
    return json::object();
}

namespace {

class Collector {
public:
    explicit Collector(const json& doc) : doc_(doc) {}

    template <typename T>
    void get(const char* key, T& out, bool required = false) {
        if (!doc_.contains(key)) {
            if (required) issues_.push_back(std::string(key) + ": missing required key");
            return;
        }
        try {
            out = doc_.at(key).get<T>();
        } catch (const json::exception&) {
            issues_.push_back(std::string(key) + ": wrong type");
        }
    }

    void fail(const std::string& message) { issues_.push_back(message); }
    bool ok() const { return issues_.empty(); }
    std::vector<std::string> take() { return std::move(issues_); }
    const json& doc() const { return doc_; }

private:
    const json& doc_;
    std::vector<std::string> issues_;
};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    ExperimentConfig cfg;
    cfg.raw = doc;
    Collector c(doc);

    if (!doc.is_object()) throw config_error({"config must be a JSON object"});

    std::string schema = "v1";
    c.get("schema", schema);
    if (schema != "v1") c.fail("schema: expected \"v1\"");

    std::string experiment;
    c.get("experiment", experiment, /*required=*/true);
    if (!experiment.empty()) {
        if (auto kind = experiment_kind_from(experiment)) {
            cfg.experiment = *kind;
        } else {
            c.fail("experiment: unknown suite '" + experiment + "'");
        }
    }

    // epsilon (single) or epsilons (list).
    if (doc.contains("epsilons")) {
        cfg.epsilons.clear();
        c.get("epsilons", cfg.epsilons);
    } else if (doc.contains("epsilon")) {
        double eps = 0.1;
        c.get("epsilon", eps);
        cfg.epsilons = {eps};
    } else if (cfg.experiment == ExperimentKind::epsilon_scan) {
        cfg.epsilons = {0.1, 0.05, 0.02};
    }
    for (double eps : cfg.epsilons) {
        if (!(eps > 0.0 && eps < 1.0)) {
            c.fail("epsilon: values must lie in (0,1)");
            break;
        }
    }
    if (cfg.epsilons.empty()) c.fail("epsilon: at least one value required");

    c.get("t_macro", cfg.t_macro);
    if (!(cfg.t_macro >= 0.0)) c.fail("t_macro: must be >= 0");

    if (doc.contains("window")) {
        const json& w = doc.at("window");
        if (!w.is_object()) {
            c.fail("window: must be an object");
        } else {
            if (w.contains("a")) cfg.a = w.at("a").get<double>();
            if (w.contains("b")) cfg.b = w.at("b").get<double>();
            if (!(cfg.a < cfg.b)) c.fail("window.a, window.b: require a < b");
            if (w.contains("topology")) {
                const std::string t = w.at("topology").get<std::string>();
                if (t == "ring") cfg.topology = Topology::ring;
                else if (t == "reflecting-segment") cfg.topology = Topology::reflecting_segment;
                else c.fail("window.topology: must be ring or reflecting-segment");
            }
            if (w.contains("lattice_extent")) {
                const json& e = w.at("lattice_extent");
                if (e.is_string() && e.get<std::string>() == "auto") {
                    cfg.auto_extent = true;
                } else if (e.is_number_integer()) {
                    cfg.auto_extent = false;
                    cfg.lattice_extent = e.get<std::int64_t>();
                    if (cfg.lattice_extent <= 0)
                        c.fail("window.lattice_extent: must be positive or \"auto\"");
                } else {
                    c.fail("window.lattice_extent: must be an integer or \"auto\"");
                }
            }
        }
    }

    c.get("runs", cfg.runs);
    if (cfg.runs <= 0) c.fail("runs: must be positive");
    c.get("root_seed", cfg.root_seed);
    c.get("sample_times", cfg.sample_times);
    if (cfg.sample_times < 0) c.fail("sample_times: must be >= 0");
    c.get("hook_stride", cfg.hook_stride);
    // Per-suite sample-count defaults: the equilibrium joint-TV estimator
    // needs ~10^6 samples for its noise floor to clear the 0.01 bound.
    if (!doc.contains("samples")) {
        if (cfg.experiment == ExperimentKind::equilibrium) cfg.samples = 1000000;
        if (cfg.experiment == ExperimentKind::heat_kernel) cfg.samples = 10000;
    }
    c.get("samples", cfg.samples);
    if (cfg.samples <= 0) c.fail("samples: must be positive");
    c.get("n_sites", cfg.n_sites);
    if (cfg.n_sites < 2 || cfg.n_sites > 12)
        c.fail("n_sites: exact oracle supports 2..12 sites");
    c.get("t_micro", cfg.t_micro);
    if (cfg.t_micro < 0.0) c.fail("t_micro: must be >= 0");
    c.get("points", cfg.points);
    c.get("lipschitz_m", cfg.lipschitz_m);
    if (cfg.lipschitz_m < 0.0) c.fail("lipschitz_m: must be >= 0");
    c.get("grid_points", cfg.grid_points);
    if (cfg.grid_points < 2) c.fail("grid_points: need at least 2");
    c.get("observable_points", cfg.observable_points);
    if (doc.contains("compare_tv_median")) {
        double v = 0.0;
        c.get("compare_tv_median", v);
        cfg.compare_tv_median = v;
    }

    if (doc.contains("phi")) {
        try {
            cfg.phi = profile_function_from_json(doc.at("phi"));
        } catch (const std::exception& e) {
            c.fail(std::string("phi: ") + e.what());
        }
    }

    if (doc.contains("oracle_initial")) {
        const json& o = doc.at("oracle_initial");
        if (o.is_object()) {
            const std::string kind = o.value("kind", "product");
            cfg.oracle_initial = kind;
            if (kind == "product") {
                cfg.oracle_density = o.value("density", 0.5);
                if (cfg.oracle_density < 0.0 || cfg.oracle_density > 1.0)
                    c.fail("oracle_initial.density: must lie in [0,1]");
            } else if (kind == "sector") {
                cfg.oracle_particles = o.value("particles", cfg.n_sites / 2);
            } else if (kind == "point") {
                cfg.oracle_state = o.value("state", 0ULL);
            } else {
                c.fail("oracle_initial.kind: must be product, sector or point");
            }
        } else {
            c.fail("oracle_initial: must be an object");
        }
    }

    if (doc.contains("she")) {
        const json& s = doc.at("she");
        if (!s.is_object()) {
            c.fail("she: must be an object");
        } else {
            cfg.she.dx = s.value("dx", cfg.she.dx);
            cfg.she.dt = s.value("dt", cfg.she.dt);
            cfg.she.extent = s.value("extent", cfg.she.extent);
            cfg.she.paths = s.value("paths", cfg.she.paths);
            cfg.she.ic = s.value("ic", cfg.she.ic);
            cfg.she.mode = s.value("mode", cfg.she.mode);
            cfg.she.trajectories = s.value("trajectories", cfg.she.trajectories);
            if (cfg.she.dx <= 0.0) c.fail("she.dx: must be positive");
            if (cfg.she.dt <= 0.0) c.fail("she.dt: must be positive");
            if (cfg.she.dt > 0.5 * cfg.she.dx * cfg.she.dx)
                c.fail("she.dt: stability requires dt <= dx^2/2");
            if (cfg.she.paths <= 0) c.fail("she.paths: must be positive");
            if (cfg.she.ic != "delta" && cfg.she.ic != "brownian" &&
                cfg.she.ic != "brownian-plus-phi")
                c.fail("she.ic: must be delta, brownian or brownian-plus-phi");
            if (cfg.she.mode != "kernel" && cfg.she.mode != "coupled")
                c.fail("she.mode: must be kernel or coupled");
        }
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        if (o.is_object()) {
            cfg.out_dir = o.value("dir", cfg.out_dir);
            cfg.write_csv = o.value("csv", cfg.write_csv);
        } else {
            c.fail("output: must be an object");
        }
    }

    cfg.thresholds = default_thresholds(cfg.experiment);
    if (doc.contains("thresholds")) {
        const json& t = doc.at("thresholds");
        if (!t.is_object()) {
            c.fail("thresholds: must be an object");
        } else {
            for (auto it = t.begin(); it != t.end(); ++it) {
                if (!cfg.thresholds.contains(it.key()))
                    c.fail("thresholds." + it.key() + ": unknown threshold for this suite");
                else
                    cfg.thresholds[it.key()] = it.value();
            }
        }
    }

    // Suite-specific requirements.
    if (cfg.experiment == ExperimentKind::lipschitz && !cfg.phi && c.ok())
        cfg.phi = ProfileFunction::linear(0.5);
    if (cfg.she.ic == "brownian-plus-phi" && !cfg.phi)
        c.fail("she.ic: brownian-plus-phi requires a phi block");

    if (!c.ok()) throw config_error(c.take());
    return cfg;
}

std::int64_t ExperimentConfig::resolve_extent(double epsilon) const {
    if (!auto_extent) return lattice_extent;
    const double reach = std::max(std::abs(a), std::abs(b)) / epsilon;
    const double buffer = 3.0 * t_macro / (epsilon * epsilon);
    return static_cast<std::int64_t>(std::ceil(reach + buffer));
}

WindowSpec ExperimentConfig::window_for(double epsilon) const {
    WindowSpec w;
    w.a = a;
    w.b = b;
    w.topology = topology;
    w.lattice_extent = resolve_extent(epsilon);
    w.validate_for(scaling_constants(epsilon));
    return w;
}

nlohmann::json ExperimentConfig::echo() const {
    json resolved;
    resolved["experiment"] = to_string(experiment);
    resolved["epsilons"] = epsilons;
    resolved["t_macro"] = t_macro;
    resolved["window"] = {{"a", a},
                          {"b", b},
                          {"topology", to_string(topology)},
                          {"auto_extent", auto_extent}};
    json extents = json::object();
    for (double eps : epsilons) {
        if (topology == Topology::reflecting_segment || auto_extent)
            extents[std::to_string(eps)] = resolve_extent(eps);
    }
    resolved["window"]["resolved_extents"] = extents;
    resolved["runs"] = runs;
    resolved["root_seed"] = root_seed;
    resolved["sample_times"] = sample_times;
    resolved["hook_stride"] = hook_stride;
    resolved["samples"] = samples;
    resolved["n_sites"] = n_sites;
    resolved["t_micro"] = t_micro;
    resolved["points"] = points;
    if (phi) resolved["phi"] = profile_function_to_json(*phi);
    resolved["lipschitz_m"] = lipschitz_m;
    resolved["grid_points"] = grid_points;
    resolved["she"] = {{"dx", she.dx},     {"dt", she.dt},   {"extent", she.extent},
                       {"paths", she.paths}, {"ic", she.ic}, {"mode", she.mode},
                       {"trajectories", she.trajectories}};
    resolved["thresholds"] = thresholds;
    return {{"input", raw}, {"resolved", resolved}};
}

}  // namespace wasep
