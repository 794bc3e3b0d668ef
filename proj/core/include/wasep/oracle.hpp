#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wasep/lattice.hpp"
#include "wasep/scaling.hpp"

namespace wasep {

// Exact realization of the exclusion process on a tiny lattice: the full
// 2^n-state continuous-time Markov chain. Used to validate Monte Carlo
// marginals by total-variation distance.
struct OracleSpec {
    int n_sites = 8;
    Topology topology = Topology::ring;
    ScalingConstants scaling;
    double t_micro = 0.0;
    std::vector<double> initial;  // probability vector over 2^n configurations

    std::size_t n_states() const { return std::size_t{1} << n_sites; }
    // Requires n_sites <= 12, a valid probability vector (sums to 1 within
    // 1e-12) and t_micro >= 0.
    void validate() const;
};

// Distribution at time t_micro: exp(t G)^T pi0, evaluated by uniformization
// with Poisson-tail truncation below 1e-14. State s encodes site i in bit i;
// bonds follow the lattice topology (n bonds on a ring, n-1 on a segment).
std::vector<double> exact_distribution(const OracleSpec& spec);

// out = G^T x for the exclusion generator of (n_sites, topology, scaling).
// Exposed so tests can check row sums and stationarity directly.
void apply_generator_transpose(int n_sites, Topology topology,
                               const ScalingConstants& scaling,
                               std::span<const double> x, std::span<double> out);

// Product measure with the given density, as a distribution over bit
// patterns.
std::vector<double> product_initial_distribution(int n_sites, double density);

// Uniform distribution on the fixed-particle-number sector {s : popcount = k}.
std::vector<double> uniform_sector_distribution(int n_sites, int k);

// Point mass on one configuration.
std::vector<double> point_mass_distribution(int n_sites, std::uint64_t state);

// Total-variation distance between two distributions on the same state space.
double tv_distance(std::span<const double> mu, std::span<const double> nu);

}  // namespace wasep
