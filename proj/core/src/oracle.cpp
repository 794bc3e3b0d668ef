#include "wasep/oracle.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace wasep {

namespace {

double vector_sum(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

void OracleSpec::validate() const {
    std::vector<std::string> issues;
    if (n_sites < 2 || n_sites > 12)
        issues.push_back("oracle: n_sites must lie in [2, 12]");
    if (t_micro < 0.0) issues.push_back("oracle: t_micro must be >= 0");
    if (initial.size() != n_states())
        issues.push_back("oracle: initial distribution must have 2^n entries");
    else {
        double sum = vector_sum(initial);
        if (std::abs(sum - 1.0) > 1e-12)
            issues.push_back("oracle: initial distribution sums to " +
                             std::to_string(sum) + ", not 1 within 1e-12");
        for (double p : initial) {
            if (p < 0.0) {
                issues.push_back("oracle: initial distribution has a negative entry");
                break;
            }
        }
    }
    if (!issues.empty()) throw config_error(std::move(issues));
}

void apply_generator_transpose(int n_sites, Topology topology,
                               const ScalingConstants& scaling,
                               std::span<const double> x, std::span<double> out) {
    const std::size_t n_states = std::size_t{1} << n_sites;
    if (x.size() != n_states || out.size() != n_states)
        throw state_error("apply_generator_transpose: dimension mismatch");
    const int n_bonds = topology == Topology::ring ? n_sites : n_sites - 1;
    std::fill(out.begin(), out.end(), 0.0);
    // (G^T x)[s'] = sum_s x[s] G[s][s'];  G[s][s] = -exit(s).
    for (std::size_t s = 0; s < n_states; ++s) {
        const double xs = x[s];
        double exit_rate = 0.0;
        for (int b = 0; b < n_bonds; ++b) {
            const int left = b;
            const int right = (b + 1) % n_sites;
            const bool occ_l = (s >> left) & 1u;
            const bool occ_r = (s >> right) & 1u;
            if (occ_l == occ_r) continue;
            // Exactly one endpoint occupied: the swap is allowed in one
            // direction, at rate p (rightward) or q (leftward).
            const double rate = occ_l ? scaling.p : scaling.q;
            const std::size_t t = s ^ ((std::size_t{1} << left) | (std::size_t{1} << right));
            out[t] += rate * xs;
            exit_rate += rate;
        }
        out[s] -= exit_rate * xs;
    }
}

std::vector<double> exact_distribution(const OracleSpec& spec) {
    spec.validate();
    const std::size_t n_states = spec.n_states();
    if (spec.t_micro == 0.0) return spec.initial;

    // Uniformization: pi(t) = sum_k Poisson_{Lt}(k) (P^T)^k pi0 with
    // P = I + G / L and L an upper bound on the exit rates.
    const int n_bonds =
        spec.topology == Topology::ring ? spec.n_sites : spec.n_sites - 1;
    const double rate_bound =
        static_cast<double>(n_bonds) * std::max(spec.scaling.p, spec.scaling.q);
    const double lt = rate_bound * spec.t_micro;

    std::vector<double> pi = spec.initial;
    std::vector<double> g(n_states);
    std::vector<double> result(n_states, 0.0);

    double log_weight = -lt;  // log Poisson pmf at k = 0
    double cumulative = 0.0;
    const double tail = 1e-14;
    for (std::uint64_t k = 0;; ++k) {
        if (k > 0) {
            apply_generator_transpose(spec.n_sites, spec.topology, spec.scaling, pi, g);
            for (std::size_t i = 0; i < n_states; ++i) pi[i] += g[i] / rate_bound;
            log_weight += std::log(lt) - std::log(static_cast<double>(k));
        }
        const double w = std::exp(log_weight);
        for (std::size_t i = 0; i < n_states; ++i) result[i] += w * pi[i];
        cumulative += w;
        if (cumulative >= 1.0 - tail && k > lt) break;
        if (k > 100000) throw state_error("uniformization failed to converge");
    }
    // Renormalize the truncated remainder.
    const double sum = vector_sum(result);
    for (auto& v : result) v /= sum;
    return result;
}

std::vector<double> product_initial_distribution(int n_sites, double density) {
    if (density < 0.0 || density > 1.0)
        throw config_error({"product distribution: density must lie in [0,1]"});
    const std::size_t n_states = std::size_t{1} << n_sites;
    std::vector<double> pi(n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
        const int k = std::popcount(s);
        pi[s] = std::pow(density, k) * std::pow(1.0 - density, n_sites - k);
    }
    return pi;
}

std::vector<double> uniform_sector_distribution(int n_sites, int k) {
    if (k < 0 || k > n_sites)
        throw config_error({"sector distribution: particle number out of range"});
    const std::size_t n_states = std::size_t{1} << n_sites;
    std::vector<double> pi(n_states, 0.0);
    std::size_t count = 0;
    for (std::size_t s = 0; s < n_states; ++s) {
        if (std::popcount(s) == k) ++count;
    }
    for (std::size_t s = 0; s < n_states; ++s) {
        if (std::popcount(s) == k) pi[s] = 1.0 / static_cast<double>(count);
    }
    return pi;
}

std::vector<double> point_mass_distribution(int n_sites, std::uint64_t state) {
    const std::size_t n_states = std::size_t{1} << n_sites;
    if (state >= n_states)
        throw config_error({"point mass: state out of range"});
    std::vector<double> pi(n_states, 0.0);
    pi[state] = 1.0;
    return pi;
}

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
    if (mu.size() != nu.size()) throw state_error("tv_distance: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += std::abs(mu[i] - nu[i]);
    return 0.5 * acc;
}

}  // namespace wasep
