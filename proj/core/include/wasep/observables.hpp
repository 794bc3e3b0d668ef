#pragma once

#include <cstdint>
#include <span>

#include "wasep/lattice.hpp"
#include "wasep/scaling.hpp"

namespace wasep {

// Lattice sites observed for the macroscopic interval [a,b]:
// [ceil(a/eps), floor(b/eps)]. Height increments over the range telescope to
// h(last) - h(first - 1), so comparisons against discrepancy counts are
// exact in integer arithmetic.
struct ObservationRange {
    std::int64_t first = 0;
    std::int64_t last = 0;

    std::int64_t n_sites() const { return last - first + 1; }
};

ObservationRange observation_range(const ScalingConstants& scaling, double a, double b);

// Requires the range (including first - 1 for height increments) to lie
// inside [min_site, max_site].
void require_inside(const ObservationRange& range, std::int64_t min_site,
                    std::int64_t max_site);

// Rescaled height htilde(t, x) = eps^{1/2} h(eps^{-2} t, eps^{-1} x),
// evaluated at the round-toward-zero lattice point of x/eps.
double rescaled_height(const HeightField& h, const ScalingConstants& scaling, double x);

// Microscopic Hopf-Cole transform
//   Z = gamma * exp(-lambda h(eps^{-2} t, eps^{-1} x) + v eps^{-2} t),
// with gamma = eps^{-1/2}/2, or 1 in unit-gamma mode. The drift multiplies
// the microscopic time, the normalization under which E[Z] follows a
// discrete heat equation. Computed in log space; exponentiated last.
double log_hopf_cole(const HeightField& h, const ScalingConstants& scaling,
                     double t_macro, double x, bool unit_gamma);
double hopf_cole(const HeightField& h, const ScalingConstants& scaling, double t_macro,
                 double x, bool unit_gamma);

// Left side of the discrepancy bound: eps^{1/2} times the number of sites in
// the observation range where the two configurations differ.
struct Discrepancy {
    std::int64_t count = 0;
    double scaled = 0.0;
};

Discrepancy discrepancy_sum(const SiteConfiguration& c1, const SiteConfiguration& c2,
                            const ScalingConstants& scaling, double a, double b);
std::int64_t discrepancy_count(const SiteConfiguration& c1, const SiteConfiguration& c2,
                               const ObservationRange& range);

// Right side of the discrepancy bound:
//   [htilde_max(t,b) - htilde_max(t,a)]/2 - [htilde_min(t,b) - htilde_min(t,a)]/2,
// carried as the integer height-increment combination over the observation
// range. value = eps^{1/2} * integer / 2, and the pathwise bound reads
// 2 * discrepancy count <= integer, compared exactly.
struct IncrementBound {
    std::int64_t integer = 0;
    double value = 0.0;
};

IncrementBound proposition_rhs(const HeightField& h_max, const HeightField& h_min,
                               const ScalingConstants& scaling, double a, double b);

// One pathwise comparison of the two sides. pass <=> slack >= 0, decided on
// the integers.
struct PropositionReport {
    double t_macro = 0.0;
    std::int64_t lhs_count = 0;    // discrepancy count
    std::int64_t rhs_integer = 0;  // height-increment combination
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = false;
    bool equality = false;
};

PropositionReport compare_proposition_sides(const Discrepancy& lhs,
                                            const IncrementBound& rhs,
                                            double t_macro);

// Total variation of the lattice difference field h1 - h2 over the
// observation range, as an integer: sum over x in [first, last] of
// |(h1 - h2)(x) - (h1 - h2)(x-1)|. Equals exactly twice the discrepancy
// count of the underlying configurations.
std::int64_t height_diff_tv_count(const HeightField& h1, const HeightField& h2,
                                  const ObservationRange& range);

// Total variation of a sequence sampled on a grid: sum of |f(x_i) - f(x_{i-1})|
// over consecutive grid points inside [lo, hi]. Exact for piecewise-constant
// lattice fields, where it attains the supremum over partitions. Requires at
// least two grid points in the interval.
double total_variation(std::span<const double> f);
double total_variation(std::span<const double> grid, std::span<const double> f,
                       double lo, double hi);

}  // namespace wasep
