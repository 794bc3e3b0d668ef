#include "wasep/suites.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wasep/initial_conditions.hpp"
#include "wasep/observables.hpp"
#include "wasep/oracle.hpp"
#include "wasep/parallel.hpp"
#include "wasep/she.hpp"

namespace wasep {

using nlohmann::json;

namespace {

constexpr std::pair<double, const char*> k_quantile_levels[] = {
    {0.25, "0.25"}, {0.5, "0.5"}, {0.75, "0.75"}, {0.9, "0.9"}};

double gauss_kernel(double t, double x) {
    return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

struct RunSeeds {
    std::uint64_t run;
    std::uint64_t events;
    std::uint64_t uniforms;
};

RunSeeds seeds_for(std::uint64_t root, std::uint64_t index) {
    const std::uint64_t run = derive_seed(root, index);
    return {run, derive_seed(run, seed_sub::events), derive_seed(run, seed_sub::uniforms)};
}

json stream_cursor_json(const EventStream& stream) {
    const auto c = stream.cursor();
    return {{"seed", c.seed},
            {"rng_state", c.rng_state},
            {"time", c.time},
            {"events_generated", c.count}};
}

}  // namespace

CoupledEnsemble build_proposition_ensemble(const ExperimentConfig& config, double epsilon,
                                           std::uint64_t run_seed) {
    const auto scaling = scaling_constants(epsilon);
    const WindowSpec window = config.window_for(epsilon);
    const auto uniforms = draw_uniform_field(derive_seed(run_seed, seed_sub::uniforms),
                                             window.n_sites(), window.lattice_extent);
    auto step = step_profile(window);
    auto eq = product_measure(constant_profile(0.5, window.n_sites(), window.lattice_extent),
                              uniforms, window.topology);
    auto [mn, mx] = sitewise_meet_join(step, eq);

    CoupledEnsemble ensemble(EventStream::for_window(
        derive_seed(run_seed, seed_sub::events), scaling, window));
    ensemble.add_replica("step", std::move(step));
    ensemble.add_replica("eq", std::move(eq));
    ensemble.add_replica("min", std::move(mn));
    ensemble.add_replica("max", std::move(mx));
    return ensemble;
}

CoupledEnsemble build_lipschitz_ensemble(const ExperimentConfig& config, double epsilon,
                                         std::uint64_t run_seed) {
    if (!config.phi) throw config_error({"lipschitz ensemble needs a phi block"});
    const auto scaling = scaling_constants(epsilon);
    const WindowSpec window = config.window_for(epsilon);
    const auto profiles =
        lipschitz_profile(*config.phi, config.lipschitz_m, epsilon, window);
    const auto uniforms = draw_uniform_field(derive_seed(run_seed, seed_sub::uniforms),
                                             window.n_sites(), window.lattice_extent);

    auto minus = product_measure(profiles.minus, uniforms, window.topology);
    auto plus = product_measure(profiles.plus, uniforms, window.topology);
    auto phi = product_measure(profiles.phi, uniforms, window.topology);
    auto eq = product_measure(constant_profile(0.5, window.n_sites(), window.lattice_extent),
                              uniforms, window.topology);
    auto [mn, mx] = sitewise_meet_join(phi, eq);

    CoupledEnsemble ensemble(EventStream::for_window(
        derive_seed(run_seed, seed_sub::events), scaling, window));
    ensemble.add_replica("minus", std::move(minus));
    ensemble.add_replica("min", std::move(mn));
    ensemble.add_replica("eq", std::move(eq));
    ensemble.add_replica("phi", std::move(phi));
    ensemble.add_replica("max", std::move(mx));
    ensemble.add_replica("plus", std::move(plus));
    return ensemble;
}

OrderingChecker::OrderingChecker(
    const CoupledEnsemble& ensemble,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (const auto& [lo, hi] : pairs) {
        const std::size_t i = ensemble.index_of(lo);
        const std::size_t j = ensemble.index_of(hi);
        if (sitewise_le(ensemble.replica(i).config, ensemble.replica(j).config)) {
            checked_.emplace_back(i, j);
            names_.emplace_back(lo, hi);
        } else {
            ++skipped_;  // incomparable initial data: skipped, not failed
        }
    }
}

std::optional<std::string> OrderingChecker::first_violation(
    const CoupledEnsemble& ensemble) const {
    for (std::size_t k = 0; k < checked_.size(); ++k) {
        const auto& lo = ensemble.replica(checked_[k].first).config;
        const auto& hi = ensemble.replica(checked_[k].second).config;
        const auto wl = lo.words();
        const auto wh = hi.words();
        for (std::size_t w = 0; w < wl.size(); ++w) {
            const std::uint64_t bad = wl[w] & ~wh[w];
            if (bad) {
                const std::int64_t index =
                    static_cast<std::int64_t>(w) * 64 + std::countr_zero(bad);
                const std::int64_t site = index - lo.origin();
                return "ordering violated: " + names_[k].first + " > " +
                       names_[k].second + " at site " + std::to_string(site) + "\n" +
                       neighborhood_dump(ensemble, site, 5);
            }
        }
    }
    return std::nullopt;
}

void OrderingChecker::require(const CoupledEnsemble& ensemble, const Event& e,
                              std::uint64_t event_index) const {
    if (auto v = first_violation(ensemble)) {
        throw hook_violation(*v + "  event index " + std::to_string(event_index) +
                             ", time " + std::to_string(e.time) + ", bond " +
                             std::to_string(e.bond));
    }
}

CoupledEnsemble::Hook sandwich_hook(const CoupledEnsemble& ensemble,
                                    std::uint64_t stride) {
    const std::size_t i_step = ensemble.index_of("step");
    const std::size_t i_eq = ensemble.index_of("eq");
    const std::size_t i_min = ensemble.index_of("min");
    const std::size_t i_max = ensemble.index_of("max");
    auto fn = [i_step, i_eq, i_min, i_max](const CoupledEnsemble& e, const Event& ev,
                                           std::uint64_t event_index) {
        const auto ws = e.replica(i_step).config.words();
        const auto we = e.replica(i_eq).config.words();
        const auto wn = e.replica(i_min).config.words();
        const auto wx = e.replica(i_max).config.words();
        for (std::size_t w = 0; w < ws.size(); ++w) {
            const std::uint64_t meet = ws[w] & we[w];
            const std::uint64_t join = ws[w] | we[w];
            const std::uint64_t bad = (wn[w] & ~meet) | (join & ~wx[w]);
            if (bad) {
                const std::int64_t index =
                    static_cast<std::int64_t>(w) * 64 + std::countr_zero(bad);
                const std::int64_t site = index - e.replica(i_step).config.origin();
                throw hook_violation(
                    "attractiveness sandwich violated at site " + std::to_string(site) +
                    ", event index " + std::to_string(event_index) + ", time " +
                    std::to_string(ev.time) + ", bond " + std::to_string(ev.bond) +
                    "\n" + neighborhood_dump(e, site, 5));
            }
        }
    };
    return CoupledEnsemble::Hook{stride, std::move(fn)};
}

double hopf_cole_mean_prediction(const ScalingConstants& scaling, double t_macro,
                                 double x) {
    // E[Z](x) = (gamma e^lambda / pi) Int_0^pi e^{-2cT(1-cos k)} S(k)
    //           cos(k (xs + 1)) dk,
    // S(k) = (1-r^2)/(1-2r cos k + r^2), r = e^{-lambda}, c = sqrt(pq),
    // T = t eps^{-2}; xs the round-toward-zero lattice point of x/eps.
    const double c = std::sqrt(scaling.p * scaling.q);
    const double big_t = scaling.micro_time(t_macro);
    const double r = std::exp(-scaling.lambda);
    const double xs1 =
        static_cast<double>(
            static_cast<std::int64_t>(std::trunc(x * scaling.inv_epsilon()))) +
        1.0;
    const double one_minus_r2 = 1.0 - r * r;

    auto integrand = [&](double k) {
        const double ck = std::cos(k);
        const double w = std::exp(-2.0 * c * big_t * (1.0 - ck));
        const double s = one_minus_r2 / (1.0 - 2.0 * r * ck + r * r);
        return w * s * std::cos(k * xs1);
    };

    // Composite Simpson; the integrand is smooth and concentrated near 0.
    const int n = 1 << 18;
    const double h = std::numbers::pi / n;
    double acc = integrand(0.0) + integrand(std::numbers::pi);
    for (int i = 1; i < n; ++i) acc += integrand(i * h) * (i % 2 ? 4.0 : 2.0);
    const double integral = acc * h / 3.0;
    return scaling.gamma * std::exp(scaling.lambda) * integral / std::numbers::pi;
}

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw state_error("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto idx = static_cast<std::int64_t>(std::ceil(q * n)) - 1;
    idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(values.size()) - 1);
    return values[static_cast<std::size_t>(idx)];
}

namespace suites {

namespace {

// ----------------------------------------------------------------- shared --

struct TimeGrid {
    std::vector<double> macro;  // t = 0, t1, ..., t_macro
};

TimeGrid sample_time_grid(double t_macro, std::int64_t intermediate) {
    TimeGrid g;
    g.macro.push_back(0.0);
    for (std::int64_t k = 1; k <= intermediate; ++k) {
        g.macro.push_back(t_macro * static_cast<double>(k) /
                          static_cast<double>(intermediate));
    }
    if (intermediate == 0 && t_macro > 0.0) g.macro.push_back(t_macro);
    return g;
}

void observable_rows_for(const CoupledEnsemble& ensemble,
                         const ScalingConstants& scaling, double t,
                         const std::vector<double>& points, CsvTable& table) {
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const auto h = ensemble.height(i);
        for (double x : points) {
            const double ht = rescaled_height(h, scaling, x);
            const double z = hopf_cole(h, scaling, t, x, /*unit_gamma=*/false);
            const auto site =
                static_cast<std::int64_t>(std::trunc(x * scaling.inv_epsilon()));
            table.add_row({ensemble.replica(i).name, csv_cell(t), csv_cell(x),
                           csv_cell(h.at(site)), csv_cell(ht), csv_cell(z)});
        }
    }
}

// ------------------------------------------------------------ proposition --

json proposition_run(const ExperimentConfig& config, double epsilon,
                     std::uint64_t global_index) {
    const auto scaling = scaling_constants(epsilon);
    const auto seeds = seeds_for(config.root_seed, global_index);
    auto ensemble = build_proposition_ensemble(config, epsilon, seeds.run);
    const auto range = observation_range(scaling, config.a, config.b);
    const auto grid = sample_time_grid(config.t_macro, config.sample_times);

    json checks = json::array();
    bool pass = true;
    double prev_micro = 0.0;
    for (double t : grid.macro) {
        const double micro = scaling.micro_time(t);
        if (micro > prev_micro) ensemble.evolve(micro - prev_micro);
        prev_micro = micro;

        const auto& step = ensemble.replica("step").config;
        const auto& eq = ensemble.replica("eq").config;
        const auto lhs_count = discrepancy_count(step, eq, range);
        Discrepancy lhs{lhs_count,
                        scaling.sqrt_epsilon() * static_cast<double>(lhs_count)};
        const auto rhs = proposition_rhs(ensemble.height("max"), ensemble.height("min"),
                                         scaling, config.a, config.b);
        auto rep = compare_proposition_sides(lhs, rhs, t);

        const auto tv_count =
            height_diff_tv_count(ensemble.height("step"), ensemble.height("eq"), range);
        const bool identity_ok = tv_count == 2 * lhs_count;
        const bool t0_equality_ok = t > 0.0 || rep.equality;
        pass = pass && rep.pass && identity_ok && t0_equality_ok;

        checks.push_back({{"t", t},
                          {"lhs_count", rep.lhs_count},
                          {"rhs_integer", rep.rhs_integer},
                          {"lhs", rep.lhs},
                          {"rhs", rep.rhs},
                          {"slack", rep.slack},
                          {"equality", rep.equality},
                          {"tv_count", tv_count},
                          {"tv_identity_ok", identity_ok},
                          {"pass", rep.pass}});
    }
    return json{{"run", global_index},
                {"epsilon", epsilon},
                {"seed", seeds.run},
                {"stream_cursor", stream_cursor_json(ensemble.stream())},
                {"checks", std::move(checks)},
                {"pass", pass}};
}

SuiteOutput proposition_impl(const ExperimentConfig& config, int jobs) {
    const std::int64_t per_eps = config.runs;
    const auto n_eps = static_cast<std::int64_t>(config.epsilons.size());
    const std::int64_t total = per_eps * n_eps;

    std::vector<json> records(static_cast<std::size_t>(total));
    parallel_blocks(total, jobs, 1, [&](std::int64_t first, std::int64_t last) {
        for (std::int64_t i = first; i < last; ++i) {
            const double eps = config.epsilons[static_cast<std::size_t>(i / per_eps)];
            records[static_cast<std::size_t>(i)] =
                proposition_run(config, eps, static_cast<std::uint64_t>(i));
        }
    });

    SuiteOutput out;
    CsvTable table{"proposition",
                   {"epsilon", "run", "seed", "t_macro", "lhs_count", "rhs_integer",
                    "lhs", "rhs", "slack", "equality", "pass"},
                   {}};
    std::int64_t failed = 0;
    std::int64_t equality_failures = 0;
    for (const auto& rec : records) {
        if (!rec.at("pass").get<bool>()) ++failed;
        for (const auto& chk : rec.at("checks")) {
            if (chk.at("t").get<double>() == 0.0 && !chk.at("equality").get<bool>())
                ++equality_failures;
            table.add_row({csv_cell(rec.at("epsilon").get<double>()),
                           csv_cell(rec.at("run").get<std::int64_t>()),
                           csv_cell(rec.at("seed").get<std::uint64_t>()),
                           csv_cell(chk.at("t").get<double>()),
                           csv_cell(chk.at("lhs_count").get<std::int64_t>()),
                           csv_cell(chk.at("rhs_integer").get<std::int64_t>()),
                           csv_cell(chk.at("lhs").get<double>()),
                           csv_cell(chk.at("rhs").get<double>()),
                           csv_cell(chk.at("slack").get<double>()),
                           csv_cell(chk.at("equality").get<bool>()),
                           csv_cell(chk.at("pass").get<bool>())});
        }
    }

    // Optional observable dump, first run of the first epsilon.
    if (!config.observable_points.empty() && total > 0) {
        CsvTable obs{"observables", {"replica", "t_macro", "x_macro", "h", "h_tilde", "Z"},
                     {}};
        const double eps = config.epsilons.front();
        const auto scaling = scaling_constants(eps);
        const auto seeds = seeds_for(config.root_seed, 0);
        auto ensemble = build_proposition_ensemble(config, eps, seeds.run);
        const auto grid = sample_time_grid(config.t_macro, config.sample_times);
        double prev = 0.0;
        for (double t : grid.macro) {
            const double micro = scaling.micro_time(t);
            if (micro > prev) ensemble.evolve(micro - prev);
            prev = micro;
            observable_rows_for(ensemble, scaling, t, config.observable_points, obs);
        }
        out.tables.push_back(std::move(obs));
    }

    out.pass = failed == 0;
    out.body = {{"records", records},
                {"aggregates",
                 {{"runs_total", total},
                  {"runs_failed", failed},
                  {"t0_equality_failures", equality_failures}}}};
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'proposition.csv' using 4:9 with points title 'slack vs t'  # "
        "slack = rhs - lhs >= 0 pathwise");
    return out;
}

// --------------------------------------------------------------- ordering --

json ordering_run(const ExperimentConfig& config, double epsilon,
                  std::uint64_t global_index) {
    const auto scaling = scaling_constants(epsilon);
    const auto seeds = seeds_for(config.root_seed, global_index);
    auto ensemble = build_proposition_ensemble(config, epsilon, seeds.run);
    const auto hook = sandwich_hook(ensemble, config.hook_stride);

    json rec{{"run", global_index}, {"epsilon", epsilon}, {"seed", seeds.run}};
    try {
        const auto applied =
            ensemble.evolve(scaling.micro_time(config.t_macro), {&hook, 1});
        rec["events"] = applied;
        rec["violation"] = nullptr;
        rec["pass"] = true;
    } catch (const hook_violation& v) {
        rec["events"] = ensemble.events_applied();
        rec["violation"] = v.what();
        rec["pass"] = false;
    }
    rec["stream_cursor"] = stream_cursor_json(ensemble.stream());
    return rec;
}

SuiteOutput ordering_impl(const ExperimentConfig& config, int jobs) {
    const std::int64_t per_eps = config.runs;
    const auto n_eps = static_cast<std::int64_t>(config.epsilons.size());
    const std::int64_t total = per_eps * n_eps;

    std::vector<json> records(static_cast<std::size_t>(total));
    parallel_blocks(total, jobs, 1, [&](std::int64_t first, std::int64_t last) {
        for (std::int64_t i = first; i < last; ++i) {
            const double eps = config.epsilons[static_cast<std::size_t>(i / per_eps)];
            records[static_cast<std::size_t>(i)] =
                ordering_run(config, eps, static_cast<std::uint64_t>(i));
        }
    });

    SuiteOutput out;
    CsvTable table{"ordering", {"epsilon", "run", "seed", "events", "pass"}, {}};
    std::int64_t failed = 0;
    std::uint64_t events = 0;
    for (const auto& rec : records) {
        if (!rec.at("pass").get<bool>()) ++failed;
        events += rec.at("events").get<std::uint64_t>();
        table.add_row({csv_cell(rec.at("epsilon").get<double>()),
                       csv_cell(rec.at("run").get<std::int64_t>()),
                       csv_cell(rec.at("seed").get<std::uint64_t>()),
                       csv_cell(rec.at("events").get<std::uint64_t>()),
                       csv_cell(rec.at("pass").get<bool>())});
    }
    out.pass = failed == 0;
    out.body = {{"records", records},
                {"aggregates",
                 {{"runs_total", total},
                  {"runs_failed", failed},
                  {"events_checked", events},
                  {"hook_stride", config.hook_stride}}}};
    out.tables.push_back(std::move(table));
    return out;
}

// ------------------------------------------------------------ equilibrium --

SuiteOutput equilibrium_impl(const ExperimentConfig& config, int jobs) {
    const double epsilon = config.epsilons.front();
    const auto scaling = scaling_constants(epsilon);
    const int n = config.n_sites;
    const std::size_t n_states = std::size_t{1} << n;

    OracleSpec spec;
    spec.n_sites = n;
    spec.topology = config.topology;
    spec.scaling = scaling;
    spec.t_micro = config.t_micro;
    spec.initial = product_initial_distribution(n, 0.5);
    const auto exact = exact_distribution(spec);

    const std::int64_t samples = config.samples;
    const std::int64_t block = 4096;
    const std::int64_t n_blocks = (samples + block - 1) / block;
    std::vector<std::vector<std::int64_t>> hist(
        static_cast<std::size_t>(n_blocks),
        std::vector<std::int64_t>(n_states, 0));

    parallel_blocks(samples, jobs, block, [&](std::int64_t first, std::int64_t last) {
        auto& h = hist[static_cast<std::size_t>(first / block)];
        for (std::int64_t i = first; i < last; ++i) {
            const std::uint64_t sample_seed =
                derive_seed(config.root_seed, static_cast<std::uint64_t>(i));
            const auto uniforms = draw_uniform_field(
                derive_seed(sample_seed, seed_sub::initial), n, 0);
            auto init = product_measure(constant_profile(0.5, n, 0), uniforms,
                                        config.topology);
            CoupledEnsemble ensemble(
                EventStream(derive_seed(sample_seed, seed_sub::events), scaling, n, 0,
                            config.topology));
            ensemble.add_replica("eq", std::move(init));
            ensemble.evolve(config.t_micro);
            ++h[ensemble.replica(std::size_t{0}).config.encode()];
        }
    });

    std::vector<double> empirical(n_states, 0.0);
    for (const auto& h : hist) {
        for (std::size_t s = 0; s < n_states; ++s)
            empirical[s] += static_cast<double>(h[s]);
    }
    for (auto& p : empirical) p /= static_cast<double>(samples);

    const double tv_joint = tv_distance(empirical, exact);

    // Multinomial noise floor of the TV estimator at this sample size.
    double expected_noise_tv = 0.0;
    for (std::size_t s = 0; s < n_states; ++s) {
        expected_noise_tv += std::sqrt(2.0 * exact[s] * (1.0 - exact[s]) /
                                       (std::numbers::pi * static_cast<double>(samples)));
    }
    expected_noise_tv *= 0.5;

    // Site marginals.
    double max_marginal_err = 0.0;
    json marginals = json::array();
    for (int site = 0; site < n; ++site) {
        double pe = 0.0, px = 0.0;
        for (std::size_t s = 0; s < n_states; ++s) {
            if ((s >> site) & 1u) {
                pe += empirical[s];
                px += exact[s];
            }
        }
        max_marginal_err = std::max(max_marginal_err, std::abs(pe - px));
        marginals.push_back({{"site", site}, {"empirical", pe}, {"exact", px}});
    }

    // Uniform-sector invariance of the oracle itself (ring only; on a
    // segment the asymmetric dynamics has boundary-localized stationary
    // profiles and sector measures are not invariant).
    double invariance_max = 0.0;
    const bool ring = config.topology == Topology::ring;
    if (ring) {
        for (int k = 0; k <= n; ++k) {
            OracleSpec s2 = spec;
            s2.initial = uniform_sector_distribution(n, k);
            invariance_max =
                std::max(invariance_max, tv_distance(exact_distribution(s2), s2.initial));
        }
    }

    const double tv_limit = config.threshold("tv_limit");
    const double inv_limit = config.threshold("invariance_limit");
    const bool tv_ok = tv_joint < tv_limit;
    const bool inv_ok = !ring || invariance_max <= inv_limit;

    SuiteOutput out;
    out.pass = tv_ok && inv_ok;
    out.body = {{"aggregates",
                 {{"samples", samples},
                  {"epsilon", epsilon},
                  {"n_sites", n},
                  {"topology", to_string(config.topology)},
                  {"t_micro", config.t_micro},
                  {"tv_joint", tv_joint},
                  {"tv_limit", tv_limit},
                  {"tv_ok", tv_ok},
                  {"expected_noise_tv", expected_noise_tv},
                  {"max_marginal_err", max_marginal_err},
                  {"sector_invariance_max", ring ? json(invariance_max) : json(nullptr)},
                  {"sector_invariance_ok", inv_ok},
                  {"marginals", marginals}}}};
    CsvTable table{"equilibrium", {"state", "exact_p", "empirical_p", "abs_diff"}, {}};
    for (std::size_t s = 0; s < n_states; ++s) {
        table.add_row({csv_cell(static_cast<std::uint64_t>(s)), csv_cell(exact[s]),
                       csv_cell(empirical[s]), csv_cell(std::abs(exact[s] - empirical[s]))});
    }
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'equilibrium.csv' using 1:2 with lines title 'exact', "
        "'equilibrium.csv' using 1:3 with points title 'empirical'");
    return out;
}

// ------------------------------------------------------------ heat kernel --

SuiteOutput heat_kernel_impl(const ExperimentConfig& config, int jobs) {
    const double epsilon = config.epsilons.front();
    const auto scaling = scaling_constants(epsilon);
    const WindowSpec window = config.window_for(epsilon);
    const auto points = config.points;
    const auto n_points = points.size();

    struct Acc {
        std::vector<double> sum, sumsq;
    };
    const std::int64_t samples = config.samples;
    const std::int64_t block = 64;
    const std::int64_t n_blocks = (samples + block - 1) / block;
    std::vector<Acc> partial(static_cast<std::size_t>(n_blocks),
                             Acc{std::vector<double>(n_points, 0.0),
                                 std::vector<double>(n_points, 0.0)});

    parallel_blocks(samples, jobs, block, [&](std::int64_t first, std::int64_t last) {
        auto& acc = partial[static_cast<std::size_t>(first / block)];
        for (std::int64_t i = first; i < last; ++i) {
            const std::uint64_t sample_seed =
                derive_seed(config.root_seed, static_cast<std::uint64_t>(i));
            CoupledEnsemble ensemble(EventStream::for_window(
                derive_seed(sample_seed, seed_sub::events), scaling, window));
            ensemble.add_replica("step", step_profile(window));
            ensemble.evolve(scaling.micro_time(config.t_macro));
            const auto h = ensemble.height(std::size_t{0});
            for (std::size_t k = 0; k < n_points; ++k) {
                const double z =
                    hopf_cole(h, scaling, config.t_macro, points[k], /*unit_gamma=*/false);
                acc.sum[k] += z;
                acc.sumsq[k] += z * z;
            }
        }
    });

    std::vector<double> sum(n_points, 0.0), sumsq(n_points, 0.0);
    for (const auto& acc : partial) {
        for (std::size_t k = 0; k < n_points; ++k) {
            sum[k] += acc.sum[k];
            sumsq[k] += acc.sumsq[k];
        }
    }

    const double rel_tol = config.threshold("relative_tolerance");
    const double se_mult = config.threshold("se_multiplier");
    const double sg_mult = config.threshold("semigroup_se_multiplier");

    SuiteOutput out;
    CsvTable table{"heat_kernel",
                   {"x", "kernel", "semigroup_mean", "mc_mean", "se", "err_vs_kernel",
                    "err_vs_semigroup", "kernel_ok", "semigroup_ok"},
                   {}};
    json rows = json::array();
    bool kernel_all = true, semigroup_all = true;
    const auto n = static_cast<double>(samples);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double mean = sum[k] / n;
        const double var = std::max(0.0, (sumsq[k] - sum[k] * sum[k] / n) / (n - 1.0));
        const double se = std::sqrt(var / n);
        const double kernel = gauss_kernel(config.t_macro, points[k]);
        const double pred = hopf_cole_mean_prediction(scaling, config.t_macro, points[k]);
        const double err_k = mean - kernel;
        const double err_p = mean - pred;
        const bool kernel_ok =
            std::abs(err_k) <= std::max(se_mult * se, rel_tol * kernel);
        const bool semigroup_ok = std::abs(err_p) <= sg_mult * se;
        kernel_all = kernel_all && kernel_ok;
        semigroup_all = semigroup_all && semigroup_ok;
        rows.push_back({{"x", points[k]},
                        {"kernel", kernel},
                        {"semigroup_mean", pred},
                        {"mc_mean", mean},
                        {"se", se},
                        {"err_vs_kernel", err_k},
                        {"err_vs_semigroup", err_p},
                        {"kernel_ok", kernel_ok},
                        {"semigroup_ok", semigroup_ok}});
        table.add_row({csv_cell(points[k]), csv_cell(kernel), csv_cell(pred),
                       csv_cell(mean), csv_cell(se), csv_cell(err_k), csv_cell(err_p),
                       csv_cell(kernel_ok), csv_cell(semigroup_ok)});
    }

    out.pass = kernel_all;
    out.body = {{"points", rows},
                {"aggregates",
                 {{"samples", samples},
                  {"epsilon", epsilon},
                  {"t_macro", config.t_macro},
                  {"kernel_test_pass", kernel_all},
                  {"semigroup_test_pass", semigroup_all},
                  {"note",
                   "kernel test compares against the continuum Gaussian kernel; the "
                   "semigroup columns give the exact finite-epsilon mean of the "
                   "discrete Hopf-Cole field, which the Monte Carlo mean must match "
                   "within sampling error"}}}};
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'heat_kernel.csv' using 1:2 with lines title 'kernel', "
        "'heat_kernel.csv' using 1:4:5 with yerrorbars title 'MC mean'");
    return out;
}

// ------------------------------------------------------------ epsilon scan --

json scan_run(const ExperimentConfig& config, double epsilon,
              std::uint64_t global_index) {
    const auto scaling = scaling_constants(epsilon);
    const auto seeds = seeds_for(config.root_seed, global_index);
    auto ensemble = build_proposition_ensemble(config, epsilon, seeds.run);
    const auto range = observation_range(scaling, config.a, config.b);

    ensemble.evolve(scaling.micro_time(config.t_macro));

    const auto& step = ensemble.replica("step").config;
    const auto& eq = ensemble.replica("eq").config;
    const auto disc = discrepancy_count(step, eq, range);
    const auto tv_count =
        height_diff_tv_count(ensemble.height("step"), ensemble.height("eq"), range);
    const auto rhs = proposition_rhs(ensemble.height("max"), ensemble.height("min"),
                                     scaling, config.a, config.b);

    const double tv = scaling.sqrt_epsilon() * static_cast<double>(tv_count);
    return json{{"run", global_index},
                {"epsilon", epsilon},
                {"seed", seeds.run},
                {"stream_cursor", stream_cursor_json(ensemble.stream())},
                {"discrepancy_count", disc},
                {"tv_count", tv_count},
                {"tv", tv},
                {"rhs_integer", rhs.integer},
                {"rhs", rhs.value},
                {"bound_unhalved", 2.0 * rhs.value},
                {"identity_ok", tv_count == 2 * disc},
                {"domination_ok", 2 * disc <= rhs.integer}};
}

SuiteOutput epsilon_scan_impl(const ExperimentConfig& config, int jobs) {
    const std::int64_t per_eps = config.runs;
    const auto n_eps = static_cast<std::int64_t>(config.epsilons.size());
    const std::int64_t total = per_eps * n_eps;

    std::vector<json> records(static_cast<std::size_t>(total));
    parallel_blocks(total, jobs, 1, [&](std::int64_t first, std::int64_t last) {
        for (std::int64_t i = first; i < last; ++i) {
            const double eps = config.epsilons[static_cast<std::size_t>(i / per_eps)];
            records[static_cast<std::size_t>(i)] =
                scan_run(config, eps, static_cast<std::uint64_t>(i));
        }
    });

    SuiteOutput out;
    CsvTable table{"scan",
                   {"epsilon", "run", "seed", "discrepancy_count", "tv_count", "tv",
                    "rhs_integer", "rhs", "bound_unhalved", "identity_ok",
                    "domination_ok"},
                   {}};
    bool identity_all = true, domination_all = true;
    json per_eps_stats = json::array();
    std::vector<double> tv_medians, rhs_q90s;
    bool quantiles_monotone = true;

    for (std::int64_t e = 0; e < n_eps; ++e) {
        std::vector<double> tvs, rhss, bounds;
        for (std::int64_t r = 0; r < per_eps; ++r) {
            const auto& rec = records[static_cast<std::size_t>(e * per_eps + r)];
            identity_all = identity_all && rec.at("identity_ok").get<bool>();
            domination_all = domination_all && rec.at("domination_ok").get<bool>();
            tvs.push_back(rec.at("tv").get<double>());
            rhss.push_back(rec.at("rhs").get<double>());
            bounds.push_back(rec.at("bound_unhalved").get<double>());
            table.add_row({csv_cell(rec.at("epsilon").get<double>()),
                           csv_cell(rec.at("run").get<std::int64_t>()),
                           csv_cell(rec.at("seed").get<std::uint64_t>()),
                           csv_cell(rec.at("discrepancy_count").get<std::int64_t>()),
                           csv_cell(rec.at("tv_count").get<std::int64_t>()),
                           csv_cell(rec.at("tv").get<double>()),
                           csv_cell(rec.at("rhs_integer").get<std::int64_t>()),
                           csv_cell(rec.at("rhs").get<double>()),
                           csv_cell(rec.at("bound_unhalved").get<double>()),
                           csv_cell(rec.at("identity_ok").get<bool>()),
                           csv_cell(rec.at("domination_ok").get<bool>())});
        }
        json stats;
        stats["epsilon"] = config.epsilons[static_cast<std::size_t>(e)];
        stats["runs"] = per_eps;
        for (const auto& [name, values] :
             {std::pair<const char*, std::vector<double>*>{"tv", &tvs},
              {"rhs", &rhss},
              {"bound_unhalved", &bounds}}) {
            json q;
            double prev = -1.0;
            for (const auto& [level, label] : k_quantile_levels) {
                const double v = empirical_quantile(*values, level);
                q[label] = v;
                if (v < prev) quantiles_monotone = false;
                prev = v;
            }
            stats[std::string("quantiles_") + name] = q;
        }
        tv_medians.push_back(empirical_quantile(tvs, 0.5));
        rhs_q90s.push_back(empirical_quantile(rhss, 0.9));
        per_eps_stats.push_back(std::move(stats));
    }

    // Tightness verdict: median TV drifts < limit between consecutive eps;
    // the 90% quantile of the bound grows by < limit as eps shrinks.
    const double drift_limit = config.threshold("median_drift_limit");
    const double growth_limit = config.threshold("q90_growth_limit");
    bool drift_ok = true, growth_ok = true;
    json drift = json::array(), growth = json::array();
    for (std::size_t e = 1; e < tv_medians.size(); ++e) {
        const double d =
            std::abs(tv_medians[e] / tv_medians[e - 1] - 1.0);
        drift.push_back(d);
        drift_ok = drift_ok && d < drift_limit;
        const double g = rhs_q90s[e] / rhs_q90s[e - 1] - 1.0;
        growth.push_back(g);
        growth_ok = growth_ok && g < growth_limit;
    }

    out.pass = identity_all && domination_all && quantiles_monotone && drift_ok &&
               growth_ok;
    out.body = {{"records", records},
                {"per_epsilon", per_eps_stats},
                {"aggregates",
                 {{"identity_all", identity_all},
                  {"domination_all", domination_all},
                  {"quantiles_monotone", quantiles_monotone},
                  {"tv_medians", tv_medians},
                  {"rhs_q90", rhs_q90s},
                  {"median_drift", drift},
                  {"median_drift_ok", drift_ok},
                  {"q90_growth", growth},
                  {"q90_growth_ok", growth_ok}}}};
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'scan.csv' using 1:6 with points title 'TV', 'scan.csv' using 1:9 "
        "with points title 'bound'");
    return out;
}

// ---------------------------------------------------------------- lipschitz --

json lipschitz_run(const ExperimentConfig& config, double epsilon,
                   std::uint64_t global_index) {
    const auto scaling = scaling_constants(epsilon);
    const auto seeds = seeds_for(config.root_seed, global_index);
    auto ensemble = build_lipschitz_ensemble(config, epsilon, seeds.run);
    const OrderingChecker checker(
        ensemble, {{"minus", "min"}, {"min", "phi"}, {"min", "eq"}, {"phi", "max"},
                   {"eq", "max"}, {"max", "plus"}, {"minus", "plus"}});
    CoupledEnsemble::Hook hook{
        config.hook_stride,
        [&checker](const CoupledEnsemble& e, const Event& ev, std::uint64_t idx) {
            checker.require(e, ev, idx);
        }};

    json rec{{"run", global_index}, {"epsilon", epsilon}, {"seed", seeds.run}};
    try {
        ensemble.evolve(scaling.micro_time(config.t_macro), {&hook, 1});
    } catch (const hook_violation& v) {
        rec["violation"] = v.what();
        rec["exact_ok"] = false;
        rec["stat_ok"] = false;
        rec["pass"] = false;
        return rec;
    }

    // Macroscopic sample grid over [a, b].
    const std::int64_t m = config.grid_points;
    std::vector<double> grid(static_cast<std::size_t>(m));
    std::vector<std::int64_t> sites(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        const double x = config.a + (config.b - config.a) * static_cast<double>(i) /
                                        static_cast<double>(m - 1);
        grid[static_cast<std::size_t>(i)] = x;
        sites[static_cast<std::size_t>(i)] =
            static_cast<std::int64_t>(std::trunc(x * scaling.inv_epsilon()));
    }

    const auto h_minus = ensemble.height("minus");
    const auto h_phi = ensemble.height("phi");
    const auto h_plus = ensemble.height("plus");
    const auto h_eq = ensemble.height("eq");

    // (i) exact interval-increment ordering on the integers, all grid pairs.
    bool exact_ok = true;
    for (std::size_t i = 0; i + 1 < sites.size() && exact_ok; ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            const auto lo = h_minus.at(sites[j]) - h_minus.at(sites[i]);
            const auto mid = h_phi.at(sites[j]) - h_phi.at(sites[i]);
            const auto hi = h_plus.at(sites[j]) - h_plus.at(sites[i]);
            if (!(lo <= mid && mid <= hi)) {
                exact_ok = false;
                break;
            }
        }
    }

    // (ii) statistical Lipschitz quotient of htilde - htilde_eq on adjacent
    // pairs, with a deterministic counting-noise slack: the expected
    // discrepancy count over a pair interval is M dx / (2 sqrt(eps)).
    const double sqe = scaling.sqrt_epsilon();
    const double base_slack = config.threshold("slack_sqrt_eps_coeff") * sqe;
    const double se_coeff = config.threshold("slack_se_coeff");
    bool stat_ok = true;
    double max_quotient = 0.0;
    json pairs = json::array();
    for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
        const double dx = grid[i + 1] - grid[i];
        const double g1 = sqe * static_cast<double>(h_phi.at(sites[i]) - h_eq.at(sites[i]));
        const double g2 =
            sqe * static_cast<double>(h_phi.at(sites[i + 1]) - h_eq.at(sites[i + 1]));
        const double quotient = std::abs(g2 - g1) / dx;
        const double expected_count = 0.5 * config.lipschitz_m * dx / sqe;
        const double se_pair =
            2.0 * sqe * std::sqrt(std::max(expected_count, 1.0)) / dx;
        const double limit = config.lipschitz_m + base_slack + se_coeff * se_pair;
        max_quotient = std::max(max_quotient, quotient);
        if (quotient > limit) stat_ok = false;
        pairs.push_back({{"x_lo", grid[i]},
                         {"x_hi", grid[i + 1]},
                         {"quotient", quotient},
                         {"limit", limit}});
    }

    rec["stream_cursor"] = stream_cursor_json(ensemble.stream());
    rec["exact_ok"] = exact_ok;
    rec["stat_ok"] = stat_ok;
    rec["max_quotient"] = max_quotient;
    rec["pairs"] = std::move(pairs);
    rec["ordering_pairs_checked"] = checker.n_checked();
    rec["ordering_pairs_skipped"] = checker.n_skipped();
    rec["pass"] = exact_ok;
    return rec;
}

SuiteOutput lipschitz_impl(const ExperimentConfig& config, int jobs) {
    const std::int64_t total = config.runs;
    const double epsilon = config.epsilons.front();

    std::vector<json> records(static_cast<std::size_t>(total));
    parallel_blocks(total, jobs, 1, [&](std::int64_t first, std::int64_t last) {
        for (std::int64_t i = first; i < last; ++i) {
            records[static_cast<std::size_t>(i)] =
                lipschitz_run(config, epsilon, static_cast<std::uint64_t>(i));
        }
    });

    SuiteOutput out;
    CsvTable table{"lipschitz", {"run", "seed", "exact_ok", "stat_ok", "max_quotient"},
                   {}};
    std::int64_t exact_fail = 0, stat_pass = 0;
    for (const auto& rec : records) {
        if (!rec.at("exact_ok").get<bool>()) ++exact_fail;
        if (rec.at("stat_ok").get<bool>()) ++stat_pass;
        table.add_row({csv_cell(rec.at("run").get<std::int64_t>()),
                       csv_cell(rec.at("seed").get<std::uint64_t>()),
                       csv_cell(rec.at("exact_ok").get<bool>()),
                       csv_cell(rec.at("stat_ok").get<bool>()),
                       csv_cell(rec.value("max_quotient", 0.0))});
    }
    const double stat_fraction =
        static_cast<double>(stat_pass) / static_cast<double>(total);
    const double required = config.threshold("stat_pass_fraction");
    out.pass = exact_fail == 0 && stat_fraction >= required;
    out.body = {{"records", records},
                {"aggregates",
                 {{"runs_total", total},
                  {"epsilon", epsilon},
                  {"lipschitz_m", config.lipschitz_m},
                  {"exact_failures", exact_fail},
                  {"stat_pass_fraction", stat_fraction},
                  {"stat_pass_required", required}}}};
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'lipschitz.csv' using 1:5 with points title 'max Lipschitz quotient'");
    return out;
}

// ---------------------------------------------------------------------- she --

CsvTable she_trajectory_table(const std::string& name, const SheGrid& grid,
                              const SheRun& run) {
    CsvTable t{name, {"t", "x", "Z", "H"}, {}};
    for (const auto& [time, field] : run.snapshots) {
        for (std::int64_t i = 0; i < grid.n_cells(); ++i) {
            const double z = field.z[static_cast<std::size_t>(i)];
            t.add_row({csv_cell(time), csv_cell(grid.x_of(i)), csv_cell(z),
                       csv_cell(-std::log(z))});
        }
    }
    return t;
}

std::vector<double> quarter_snapshots(double horizon) {
    return {0.25 * horizon, 0.5 * horizon, 0.75 * horizon, horizon};
}

SuiteOutput she_kernel_impl(const ExperimentConfig& config, int jobs) {
    SheGrid grid{config.she.dx, config.she.dt,
                 std::max(config.she.extent, 6.0 * std::sqrt(std::max(config.t_macro, 1e-9))),
                 config.t_macro};
    grid.validate();
    SheOptions options;

    // Zero-noise reduction: the integrator must reproduce the deterministic
    // heat kernel at the origin.
    options.zero_noise = true;
    const auto det = integrate_she(grid, 0, SheInitialData::delta, options);
    const double det_z0 = det.final_field.z[static_cast<std::size_t>(grid.cell_of(0.0))];
    const double kernel0 = gauss_kernel(config.t_macro, 0.0);
    const double zero_noise_err = det_z0 - kernel0;
    options.zero_noise = false;

    const auto& points = config.points;
    const auto n_points = points.size();
    struct Acc {
        std::vector<double> sum, sumsq;
        std::uint64_t clamps = 0, updates = 0;
    };
    const std::int64_t paths = config.she.paths;
    const std::int64_t block = 16;
    const std::int64_t n_blocks = (paths + block - 1) / block;
    std::vector<Acc> partial(static_cast<std::size_t>(n_blocks),
                             Acc{std::vector<double>(n_points, 0.0),
                                 std::vector<double>(n_points, 0.0), 0, 0});

    parallel_blocks(paths, jobs, block, [&](std::int64_t first, std::int64_t last) {
        auto& acc = partial[static_cast<std::size_t>(first / block)];
        SheOptions opt;
        for (std::int64_t i = first; i < last; ++i) {
            const std::uint64_t path_seed =
                derive_seed(config.root_seed, static_cast<std::uint64_t>(i));
            const auto run = integrate_she(grid, derive_seed(path_seed, seed_sub::noise),
                                           SheInitialData::delta, opt);
            for (std::size_t k = 0; k < n_points; ++k) {
                const double z =
                    run.final_field.z[static_cast<std::size_t>(grid.cell_of(points[k]))];
                acc.sum[k] += z;
                acc.sumsq[k] += z * z;
            }
            acc.clamps += run.clamp_events;
            acc.updates += run.updates;
        }
    });

    std::vector<double> sum(n_points, 0.0), sumsq(n_points, 0.0);
    std::uint64_t clamps = 0, updates = 0;
    for (const auto& acc : partial) {
        for (std::size_t k = 0; k < n_points; ++k) {
            sum[k] += acc.sum[k];
            sumsq[k] += acc.sumsq[k];
        }
        clamps += acc.clamps;
        updates += acc.updates;
    }

    const double rel_tol = config.threshold("relative_tolerance");
    const double se_mult = config.threshold("se_multiplier");
    const double zero_tol = config.threshold("zero_noise_tolerance");
    const double clamp_limit = config.threshold("clamp_fraction_limit");

    SuiteOutput out;
    CsvTable table{"she_kernel", {"x", "kernel", "mc_mean", "se", "err", "ok"}, {}};
    json rows = json::array();
    bool kernel_all = true;
    const auto n = static_cast<double>(paths);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double mean = sum[k] / n;
        const double var = std::max(0.0, (sumsq[k] - sum[k] * sum[k] / n) / (n - 1.0));
        const double se = std::sqrt(var / n);
        const double kernel = gauss_kernel(config.t_macro, points[k]);
        const double err = mean - kernel;
        const bool ok = std::abs(err) <= std::max(se_mult * se, rel_tol * kernel);
        kernel_all = kernel_all && ok;
        rows.push_back({{"x", points[k]},
                        {"kernel", kernel},
                        {"mc_mean", mean},
                        {"se", se},
                        {"err", err},
                        {"ok", ok}});
        table.add_row({csv_cell(points[k]), csv_cell(kernel), csv_cell(mean),
                       csv_cell(se), csv_cell(err), csv_cell(ok)});
    }
    const double clamp_fraction =
        updates == 0 ? 0.0 : static_cast<double>(clamps) / static_cast<double>(updates);
    const bool zero_ok = std::abs(zero_noise_err) <= zero_tol;
    const bool clamp_ok = clamp_fraction < clamp_limit;

    out.pass = kernel_all && zero_ok && clamp_ok;
    out.body = {{"points", rows},
                {"aggregates",
                 {{"paths", paths},
                  {"grid", {{"dx", grid.dx}, {"dt", grid.dt}, {"extent", grid.extent}}},
                  {"zero_noise_err", zero_noise_err},
                  {"zero_noise_ok", zero_ok},
                  {"clamp_fraction", clamp_fraction},
                  {"clamp_ok", clamp_ok},
                  {"kernel_test_pass", kernel_all}}}};
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'she_kernel.csv' using 1:2 with lines title 'kernel', "
        "'she_kernel.csv' using 1:3:4 with yerrorbars title 'MC mean'");
    if (config.she.trajectories) {
        SheOptions opt;
        opt.snapshot_times = quarter_snapshots(grid.horizon);
        const std::uint64_t path_seed = derive_seed(config.root_seed, 0);
        const auto run = integrate_she(grid, derive_seed(path_seed, seed_sub::noise),
                                       SheInitialData::delta, opt);
        out.tables.push_back(she_trajectory_table("she_trajectory", grid, run));
        out.plot_hints.push_back(
            "plot 'she_trajectory.csv' using 2:3 with lines title 'Z(t, .)'");
    }
    return out;
}

SuiteOutput she_coupled_impl(const ExperimentConfig& config, int jobs) {
    SheGrid grid{config.she.dx, config.she.dt,
                 std::max(config.she.extent, 6.0 * std::sqrt(std::max(config.t_macro, 1e-9))),
                 config.t_macro};
    grid.validate();

    const std::int64_t paths = config.she.paths;
    std::vector<double> tvs(static_cast<std::size_t>(paths), 0.0);
    std::vector<std::uint64_t> clamps(static_cast<std::size_t>(paths), 0);
    std::vector<std::uint64_t> updates(static_cast<std::size_t>(paths), 0);

    const std::int64_t cell0 = grid.cell_of(0.0);
    std::vector<double> xs(static_cast<std::size_t>(grid.n_cells()));
    for (std::int64_t i = 0; i < grid.n_cells(); ++i) xs[static_cast<std::size_t>(i)] = grid.x_of(i);

    parallel_blocks(paths, jobs, 4, [&](std::int64_t first, std::int64_t last) {
        SheOptions opt;
        for (std::int64_t i = first; i < last; ++i) {
            const std::uint64_t path_seed =
                derive_seed(config.root_seed, static_cast<std::uint64_t>(i));
            opt.brownian_seed = derive_seed(path_seed, seed_sub::brownian);
            if (config.she.ic == "brownian-plus-phi") opt.phi = config.phi;
            const auto [delta_run, eq_run] = integrate_she_coupled(
                grid, derive_seed(path_seed, seed_sub::noise), SheInitialData::delta,
                SheInitialData::brownian, opt);
            const auto h = log_field(delta_run.final_field);
            const auto heq = log_field(eq_run.final_field);
            std::vector<double> diff(h.size());
            for (std::size_t c = 0; c < h.size(); ++c)
                diff[c] = h[c] - (heq[c] - heq[static_cast<std::size_t>(cell0)]);
            tvs[static_cast<std::size_t>(i)] =
                total_variation(xs, diff, config.a, config.b);
            clamps[static_cast<std::size_t>(i)] =
                delta_run.clamp_events + eq_run.clamp_events;
            updates[static_cast<std::size_t>(i)] = delta_run.updates + eq_run.updates;
        }
    });

    json q;
    for (const auto& [level, label] : k_quantile_levels)
        q[label] = empirical_quantile(tvs, level);
    const double median = empirical_quantile(tvs, 0.5);

    std::uint64_t clamp_total = 0, update_total = 0;
    for (std::size_t i = 0; i < tvs.size(); ++i) {
        clamp_total += clamps[i];
        update_total += updates[i];
    }
    const double clamp_fraction =
        update_total == 0 ? 0.0
                          : static_cast<double>(clamp_total) /
                                static_cast<double>(update_total);
    const bool clamp_ok = clamp_fraction < config.threshold("clamp_fraction_limit");

    // Optional cross-check against a particle-scan TV median supplied in the
    // config.
    json compare = nullptr;
    bool compare_ok = true;
    if (config.compare_tv_median) {
        const double ref = *config.compare_tv_median;
        const double ratio_err = std::abs(median / ref - 1.0);
        compare_ok = ratio_err <= config.threshold("tv_median_agreement");
        compare = {{"reference_median", ref},
                   {"ratio_err", ratio_err},
                   {"ok", compare_ok}};
    }

    SuiteOutput out;
    out.pass = clamp_ok && compare_ok;
    out.body = {{"aggregates",
                 {{"paths", paths},
                  {"grid", {{"dx", grid.dx}, {"dt", grid.dt}, {"extent", grid.extent}}},
                  {"interval", {config.a, config.b}},
                  {"tv_quantiles", q},
                  {"tv_median", median},
                  {"clamp_fraction", clamp_fraction},
                  {"clamp_ok", clamp_ok},
                  {"scan_comparison", compare}}}};
    CsvTable table{"she_coupled", {"path", "tv"}, {}};
    for (std::size_t i = 0; i < tvs.size(); ++i)
        table.add_row({csv_cell(static_cast<std::int64_t>(i)), csv_cell(tvs[i])});
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'she_coupled.csv' using 2 with histogram title 'TV of H - Heq'");
    if (config.she.trajectories) {
        SheOptions opt;
        opt.snapshot_times = quarter_snapshots(grid.horizon);
        const std::uint64_t path_seed = derive_seed(config.root_seed, 0);
        opt.brownian_seed = derive_seed(path_seed, seed_sub::brownian);
        if (config.she.ic == "brownian-plus-phi") opt.phi = config.phi;
        // Snapshots come from per-field single runs over the same noise
        // stream as coupled path 0.
        const auto d = integrate_she(grid, derive_seed(path_seed, seed_sub::noise),
                                     SheInitialData::delta, opt);
        const auto b = integrate_she(grid, derive_seed(path_seed, seed_sub::noise),
                                     SheInitialData::brownian, opt);
        out.tables.push_back(she_trajectory_table("she_trajectory_delta", grid, d));
        out.tables.push_back(she_trajectory_table("she_trajectory_eq", grid, b));
        out.plot_hints.push_back(
            "plot 'she_trajectory_delta.csv' using 2:4 with lines title 'H(t, .)'");
    }
    return out;
}

// -------------------------------------------------------------------- oracle --

SuiteOutput oracle_impl(const ExperimentConfig& config, int) {
    const double epsilon = config.epsilons.front();
    const auto scaling = scaling_constants(epsilon);
    const int n = config.n_sites;
    const std::size_t n_states = std::size_t{1} << n;

    OracleSpec spec;
    spec.n_sites = n;
    spec.topology = config.topology;
    spec.scaling = scaling;
    spec.t_micro = config.t_micro;
    if (config.oracle_initial == "product")
        spec.initial = product_initial_distribution(n, config.oracle_density);
    else if (config.oracle_initial == "sector")
        spec.initial = uniform_sector_distribution(n, config.oracle_particles);
    else
        spec.initial = point_mass_distribution(n, config.oracle_state);

    const auto exact = exact_distribution(spec);

    // Generator row sums through the transpose action on basis vectors.
    const double row_limit = config.threshold("row_sum_limit");
    double max_row_sum = 0.0;
    {
        std::vector<double> e(n_states, 0.0), out_vec(n_states, 0.0);
        for (std::size_t s = 0; s < n_states; ++s) {
            e[s] = 1.0;
            apply_generator_transpose(n, spec.topology, scaling, e, out_vec);
            const double row = std::accumulate(out_vec.begin(), out_vec.end(), 0.0);
            max_row_sum = std::max(max_row_sum, std::abs(row));
            e[s] = 0.0;
        }
    }

    const double prob_limit = config.threshold("prob_sum_limit");
    const double prob_sum = std::accumulate(exact.begin(), exact.end(), 0.0);
    const bool prob_ok = std::abs(prob_sum - 1.0) <= prob_limit;

    const bool ring = spec.topology == Topology::ring;
    double invariance_max = 0.0;
    if (ring) {
        for (int k = 0; k <= n; ++k) {
            OracleSpec s2 = spec;
            s2.initial = uniform_sector_distribution(n, k);
            invariance_max =
                std::max(invariance_max, tv_distance(exact_distribution(s2), s2.initial));
        }
    }
    const bool inv_ok = !ring || invariance_max <= config.threshold("invariance_limit");

    // t = 0 must return the initial distribution.
    OracleSpec s0 = spec;
    s0.t_micro = 0.0;
    const bool t0_ok = tv_distance(exact_distribution(s0), spec.initial) == 0.0;

    const bool row_ok = max_row_sum <= row_limit;

    SuiteOutput out;
    out.pass = row_ok && prob_ok && inv_ok && t0_ok;
    out.body = {{"aggregates",
                 {{"n_sites", n},
                  {"topology", to_string(spec.topology)},
                  {"epsilon", epsilon},
                  {"t_micro", spec.t_micro},
                  {"max_row_sum", max_row_sum},
                  {"row_sums_ok", row_ok},
                  {"probability_sum", prob_sum},
                  {"probability_sum_ok", prob_ok},
                  {"sector_invariance_max", ring ? json(invariance_max) : json(nullptr)},
                  {"sector_invariance_ok", inv_ok},
                  {"t0_identity_ok", t0_ok}}}};
    CsvTable table{"oracle", {"state", "probability"}, {}};
    for (std::size_t s = 0; s < n_states; ++s)
        table.add_row({csv_cell(static_cast<std::uint64_t>(s)), csv_cell(exact[s])});
    out.tables.push_back(std::move(table));
    out.plot_hints.push_back(
        "plot 'oracle.csv' using 1:2 with impulses title 'exact distribution'");
    return out;
}

}  // namespace

SuiteOutput proposition(const ExperimentConfig& c, int jobs) { return proposition_impl(c, jobs); }
SuiteOutput ordering(const ExperimentConfig& c, int jobs) { return ordering_impl(c, jobs); }
SuiteOutput equilibrium(const ExperimentConfig& c, int jobs) { return equilibrium_impl(c, jobs); }
SuiteOutput heat_kernel(const ExperimentConfig& c, int jobs) { return heat_kernel_impl(c, jobs); }
SuiteOutput epsilon_scan(const ExperimentConfig& c, int jobs) { return epsilon_scan_impl(c, jobs); }
SuiteOutput lipschitz(const ExperimentConfig& c, int jobs) { return lipschitz_impl(c, jobs); }
SuiteOutput she(const ExperimentConfig& c, int jobs) {
    return c.she.mode == "coupled" ? she_coupled_impl(c, jobs) : she_kernel_impl(c, jobs);
}
SuiteOutput oracle(const ExperimentConfig& c, int jobs) { return oracle_impl(c, jobs); }

SuiteOutput dispatch(const ExperimentConfig& config, int jobs) {
    switch (config.experiment) {
        case ExperimentKind::proposition: return proposition(config, jobs);
        case ExperimentKind::ordering: return ordering(config, jobs);
        case ExperimentKind::equilibrium: return equilibrium(config, jobs);
        case ExperimentKind::heat_kernel: return heat_kernel(config, jobs);
        case ExperimentKind::epsilon_scan: return epsilon_scan(config, jobs);
        case ExperimentKind::lipschitz: return lipschitz(config, jobs);
        case ExperimentKind::she: return she(config, jobs);
        case ExperimentKind::oracle: return oracle(config, jobs);
    }
    throw config_error({"experiment: unknown suite"});
}

std::optional<json> replay_single(const ExperimentConfig& config,
                                  std::int64_t run_index) {
    const auto per_eps = config.runs;
    const auto eps_of = [&](std::int64_t i) {
        const auto e = static_cast<std::size_t>(i / per_eps);
        if (e >= config.epsilons.size())
            throw config_error({"replay: run index out of range"});
        return config.epsilons[e];
    };
    switch (config.experiment) {
        case ExperimentKind::proposition:
            return proposition_run(config, eps_of(run_index),
                                   static_cast<std::uint64_t>(run_index));
        case ExperimentKind::ordering:
            return ordering_run(config, eps_of(run_index),
                                static_cast<std::uint64_t>(run_index));
        case ExperimentKind::epsilon_scan:
            return scan_run(config, eps_of(run_index),
                            static_cast<std::uint64_t>(run_index));
        case ExperimentKind::lipschitz:
            if (run_index < 0 || run_index >= config.runs)
                throw config_error({"replay: run index out of range"});
            return lipschitz_run(config, config.epsilons.front(),
                                 static_cast<std::uint64_t>(run_index));
        default:
            return std::nullopt;
    }
}

}  // namespace suites

}  // namespace wasep
