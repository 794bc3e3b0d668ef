#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wasep/lattice.hpp"
#include "wasep/rng.hpp"
#include "wasep/scaling.hpp"

namespace wasep {

// Per-site target densities rho(x) in [0,1].
struct DensityProfile {
    std::vector<double> rho;  // index x + origin
    std::int64_t origin = 0;

    std::int64_t n_sites() const { return static_cast<std::int64_t>(rho.size()); }
    double at(std::int64_t x) const { return rho[static_cast<std::size_t>(x + origin)]; }
};

DensityProfile constant_profile(double density, std::int64_t n_sites,
                                std::int64_t origin);

// One uniform draw per site, shared by all product-measure replicas of a run
// so that pointwise-ordered profiles yield sitewise-ordered configurations.
struct UniformField {
    std::vector<double> u;  // index x + origin, values in [0,1)
    std::int64_t origin = 0;
};

UniformField draw_uniform_field(std::uint64_t seed, std::int64_t n_sites,
                                std::int64_t origin);

// Step initial condition eta0(x) = 1{x >= 0}. Segment topology only.
SiteConfiguration step_profile(const WindowSpec& window);

// eta(x) = 1{u(x) < rho(x)}; monotone in the profile for fixed uniforms.
SiteConfiguration product_measure(const DensityProfile& profile,
                                  const UniformField& uniforms, Topology topology);

// Sitewise minimum and maximum of two configurations on the same window.
std::pair<SiteConfiguration, SiteConfiguration> sitewise_meet_join(
    const SiteConfiguration& c1, const SiteConfiguration& c2);

// Macroscopic profile function phi, supplied in configs as one of the named
// built-ins.
class ProfileFunction {
public:
    enum class Kind { linear, sine, piecewise_linear };

    static ProfileFunction linear(double slope);
    static ProfileFunction sine(double amplitude, double period);
    // Breakpoints as (position, value) pairs in macroscopic units, sorted by
    // position; constant extrapolation outside the breakpoint range.
    static ProfileFunction piecewise_linear(std::vector<std::pair<double, double>> pts);

    double operator()(double s) const;
    Kind kind() const { return kind_; }
    double slope() const { return a_; }
    double amplitude() const { return a_; }
    double period() const { return b_; }
    const std::vector<std::pair<double, double>>& breakpoints() const { return pts_; }

private:
    Kind kind_ = Kind::linear;
    double a_ = 0.0;
    double b_ = 1.0;
    std::vector<std::pair<double, double>> pts_;
};

// Discretization of a Lipschitz perturbation: the profile with
// rho(x+1) = 1/2 + eps^{-1/2} (phi(eps x) - phi(eps (x-1))) / 2, together
// with the constant companion profiles rho_pm = (1 pm eps^{1/2} M) / 2.
struct LipschitzProfiles {
    DensityProfile phi;
    DensityProfile plus;
    DensityProfile minus;
};

// Verifies |phi(eps x) - phi(eps (x-1))| <= M eps on every window bond (the
// sampled Lipschitz check) and that all densities stay in [0,1]; throws
// config_error otherwise.
LipschitzProfiles lipschitz_profile(const ProfileFunction& phi, double lipschitz_m,
                                    double epsilon, const WindowSpec& window);

}  // namespace wasep
