#include "wasep/observables.hpp"

#include <cmath>
#include <string>

namespace wasep {

ObservationRange observation_range(const ScalingConstants& scaling, double a, double b) {
    if (!(a < b)) throw config_error({"observation range: require a < b"});
    ObservationRange r;
    r.first = static_cast<std::int64_t>(std::ceil(a * scaling.inv_epsilon()));
    r.last = static_cast<std::int64_t>(std::floor(b * scaling.inv_epsilon()));
    if (r.first > r.last)
        throw config_error({"observation range contains no lattice site"});
    return r;
}

void require_inside(const ObservationRange& range, std::int64_t min_site,
                    std::int64_t max_site) {
    if (range.first - 1 < min_site || range.last > max_site) {
        throw state_error("observation range [" + std::to_string(range.first) + ", " +
                          std::to_string(range.last) +
                          "] does not fit inside the lattice [" +
                          std::to_string(min_site) + ", " + std::to_string(max_site) +
                          "]");
    }
}

double rescaled_height(const HeightField& h, const ScalingConstants& scaling, double x) {
    const auto site = static_cast<std::int64_t>(std::trunc(x * scaling.inv_epsilon()));
    return scaling.sqrt_epsilon() * static_cast<double>(h.at(site));
}

double log_hopf_cole(const HeightField& h, const ScalingConstants& scaling,
                     double t_macro, double x, bool unit_gamma) {
    const auto site = static_cast<std::int64_t>(std::trunc(x * scaling.inv_epsilon()));
    const double log_gamma = unit_gamma ? 0.0 : std::log(scaling.gamma);
    return log_gamma - scaling.lambda * static_cast<double>(h.at(site)) +
           scaling.v * scaling.micro_time(t_macro);
}

double hopf_cole(const HeightField& h, const ScalingConstants& scaling, double t_macro,
                 double x, bool unit_gamma) {
    return std::exp(log_hopf_cole(h, scaling, t_macro, x, unit_gamma));
}

std::int64_t discrepancy_count(const SiteConfiguration& c1, const SiteConfiguration& c2,
                               const ObservationRange& range) {
    if (!c1.same_shape(c2)) throw state_error("discrepancy: window mismatch");
    require_inside(range, c1.min_site(), c1.max_site());
    std::int64_t count = 0;
    for (std::int64_t x = range.first; x <= range.last; ++x) {
        count += c1.occupied(x) != c2.occupied(x);
    }
    return count;
}

Discrepancy discrepancy_sum(const SiteConfiguration& c1, const SiteConfiguration& c2,
                            const ScalingConstants& scaling, double a, double b) {
    const auto range = observation_range(scaling, a, b);
    Discrepancy d;
    d.count = discrepancy_count(c1, c2, range);
    d.scaled = scaling.sqrt_epsilon() * static_cast<double>(d.count);
    return d;
}

IncrementBound proposition_rhs(const HeightField& h_max, const HeightField& h_min,
                               const ScalingConstants& scaling, double a, double b) {
    const auto range = observation_range(scaling, a, b);
    require_inside(range, h_max.min_site(), h_max.max_site());
    require_inside(range, h_min.min_site(), h_min.max_site());
    IncrementBound r;
    r.integer = (h_max.at(range.last) - h_max.at(range.first - 1)) -
                (h_min.at(range.last) - h_min.at(range.first - 1));
    r.value = 0.5 * scaling.sqrt_epsilon() * static_cast<double>(r.integer);
    return r;
}

PropositionReport compare_proposition_sides(const Discrepancy& lhs,
                                            const IncrementBound& rhs, double t_macro) {
    PropositionReport rep;
    rep.t_macro = t_macro;
    rep.lhs_count = lhs.count;
    rep.rhs_integer = rhs.integer;
    rep.lhs = lhs.scaled;
    rep.rhs = rhs.value;
    rep.slack = rhs.value - lhs.scaled;
    rep.pass = 2 * lhs.count <= rhs.integer;
    rep.equality = 2 * lhs.count == rhs.integer;
    return rep;
}

std::int64_t height_diff_tv_count(const HeightField& h1, const HeightField& h2,
                                  const ObservationRange& range) {
    require_inside(range, h1.min_site(), h1.max_site());
    require_inside(range, h2.min_site(), h2.max_site());
    std::int64_t tv = 0;
    std::int64_t prev = h1.at(range.first - 1) - h2.at(range.first - 1);
    for (std::int64_t x = range.first; x <= range.last; ++x) {
        const std::int64_t cur = h1.at(x) - h2.at(x);
        tv += std::abs(cur - prev);
        prev = cur;
    }
    return tv;
}

double total_variation(std::span<const double> f) {
    if (f.size() < 2) throw config_error({"total variation needs at least two points"});
    double tv = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) tv += std::abs(f[i] - f[i - 1]);
    return tv;
}

double total_variation(std::span<const double> grid, std::span<const double> f,
                       double lo, double hi) {
    if (grid.size() != f.size())
        throw config_error({"total variation: grid and values differ in length"});
    double tv = 0.0;
    std::size_t inside = 0;
    bool have_prev = false;
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < lo || grid[i] > hi) continue;
        ++inside;
        if (have_prev) tv += std::abs(f[i] - prev);
        prev = f[i];
        have_prev = true;
    }
    if (inside < 2)
        throw config_error({"total variation: fewer than two grid points in interval"});
    return tv;
}

}  // namespace wasep
