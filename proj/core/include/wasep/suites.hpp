#pragma once

#include <cstdint>
#include <optional>

#include "wasep/config.hpp"
#include "wasep/dynamics.hpp"
#include "wasep/report.hpp"

namespace wasep {

// Sub-stream indices for per-run seed derivation. A run with index i under
// root seed R uses run_seed = derive_seed(R, i), and draws independent
// streams as derive_seed(run_seed, Sub::...).
namespace seed_sub {
inline constexpr std::uint64_t events = 0;    // Poissonian event stream
inline constexpr std::uint64_t uniforms = 1;  // shared uniform field
inline constexpr std::uint64_t initial = 2;   // per-sample initial draws
inline constexpr std::uint64_t noise = 3;     // SHE space-time noise
inline constexpr std::uint64_t brownian = 4;  // SHE Brownian initial path
}  // namespace seed_sub

// The four-replica coupled system of the discrepancy bound: step, an
// equilibrium sample, and their sitewise meet/join, all driven by one
// event stream.
CoupledEnsemble build_proposition_ensemble(const ExperimentConfig& config, double epsilon,
                                           std::uint64_t run_seed);

// The six-replica system of the Lipschitz sandwich: minus <= min <= {phi, eq}
// <= max <= plus, where min/max are the meet/join of the phi and eq samples
// and all product measures share one uniform field.
CoupledEnsemble build_lipschitz_ensemble(const ExperimentConfig& config, double epsilon,
                                         std::uint64_t run_seed);

// Declared partial order between replicas. Pairs whose initial data are
// incomparable are skipped, not failed.
class OrderingChecker {
public:
    OrderingChecker(const CoupledEnsemble& ensemble,
                    const std::vector<std::pair<std::string, std::string>>& pairs);

    // Returns a diagnostic for the first violated pair, or nullopt.
    std::optional<std::string> first_violation(const CoupledEnsemble& ensemble) const;
    // Throwing form for use as an evolve() hook.
    void require(const CoupledEnsemble& ensemble, const Event& e,
                 std::uint64_t event_index) const;

    std::size_t n_checked() const { return checked_.size(); }
    std::size_t n_skipped() const { return skipped_; }

private:
    std::vector<std::pair<std::size_t, std::size_t>> checked_;  // lo, hi indices
    std::vector<std::pair<std::string, std::string>> names_;
    std::size_t skipped_ = 0;
};

// Stride-1-capable hook asserting the attractiveness sandwich
// min <= step^eq <= {step,eq} <= step v eq <= max on the proposition
// ensemble; throws hook_violation with diagnostics.
CoupledEnsemble::Hook sandwich_hook(const CoupledEnsemble& ensemble,
                                    std::uint64_t stride);

// Exact mean of the Hopf-Cole field over the step initial data: E[Z] obeys
// a discrete heat equation with diffusivity sqrt(pq), so the mean at
// macroscopic (t, x) is a lattice-kernel convolution of the initial wedge
// profile, evaluated here in Fourier form by Simpson quadrature. This is
// the sharp finite-epsilon reference for the heat-kernel test.
double hopf_cole_mean_prediction(const ScalingConstants& scaling, double t_macro,
                                 double x);

// Empirical quantile at level q: sorted value at index ceil(q n) - 1.
double empirical_quantile(std::vector<double> values, double q);

namespace suites {

SuiteOutput proposition(const ExperimentConfig& config, int jobs);
SuiteOutput ordering(const ExperimentConfig& config, int jobs);
SuiteOutput equilibrium(const ExperimentConfig& config, int jobs);
SuiteOutput heat_kernel(const ExperimentConfig& config, int jobs);
SuiteOutput epsilon_scan(const ExperimentConfig& config, int jobs);
SuiteOutput lipschitz(const ExperimentConfig& config, int jobs);
SuiteOutput she(const ExperimentConfig& config, int jobs);
SuiteOutput oracle(const ExperimentConfig& config, int jobs);

SuiteOutput dispatch(const ExperimentConfig& config, int jobs);

// Re-execute one run of a per-run-record suite (proposition, ordering,
// epsilon-scan, lipschitz). Returns nullopt for suites without per-run
// records.
std::optional<nlohmann::json> replay_single(const ExperimentConfig& config,
                                            std::int64_t run_index);

}  // namespace suites

}  // namespace wasep
