#include "wasep/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wasep {

DensityProfile constant_profile(double density, std::int64_t n_sites,
                                std::int64_t origin) {
    if (density < 0.0 || density > 1.0)
        throw config_error({"density must lie in [0,1]"});
    DensityProfile p;
    p.origin = origin;
    p.rho.assign(static_cast<std::size_t>(n_sites), density);
    return p;
}

UniformField draw_uniform_field(std::uint64_t seed, std::int64_t n_sites,
                                std::int64_t origin) {
    UniformField f;
    f.origin = origin;
    f.u.resize(static_cast<std::size_t>(n_sites));
    Rng rng(seed);
    for (auto& v : f.u) v = rng.u01();
    return f;
}

SiteConfiguration step_profile(const WindowSpec& window) {
    if (window.topology == Topology::ring)
        throw config_error({"step initial data requires the segment topology"});
    auto c = SiteConfiguration::for_window(window);
    for (std::int64_t x = 0; x <= c.max_site(); ++x) c.set(x, true);
    return c;
}

SiteConfiguration product_measure(const DensityProfile& profile,
                                  const UniformField& uniforms, Topology topology) {
    if (profile.rho.size() != uniforms.u.size() || profile.origin != uniforms.origin)
        throw config_error({"product_measure: profile and uniform field lengths differ"});
    SiteConfiguration c(profile.n_sites(), profile.origin, topology);
    for (std::size_t i = 0; i < profile.rho.size(); ++i) {
        if (uniforms.u[i] < profile.rho[i])
            c.set_index(static_cast<std::int64_t>(i), true);
    }
    return c;
}

std::pair<SiteConfiguration, SiteConfiguration> sitewise_meet_join(
    const SiteConfiguration& c1, const SiteConfiguration& c2) {
    if (!c1.same_shape(c2) || c1.topology() != c2.topology())
        throw state_error("sitewise_meet_join: window mismatch");
    SiteConfiguration meet = c1;
    SiteConfiguration join = c1;
    const auto w2 = c2.words();
    auto wm = meet.words();
    auto wj = join.words();
    for (std::size_t i = 0; i < w2.size(); ++i) {
        wm[i] &= w2[i];
        wj[i] |= w2[i];
    }
    return {std::move(meet), std::move(join)};
}

ProfileFunction ProfileFunction::linear(double slope) {
    ProfileFunction f;
    f.kind_ = Kind::linear;
    f.a_ = slope;
    return f;
}

ProfileFunction ProfileFunction::sine(double amplitude, double period) {
    if (period <= 0.0) throw config_error({"sine profile: period must be positive"});
    ProfileFunction f;
    f.kind_ = Kind::sine;
    f.a_ = amplitude;
    f.b_ = period;
    return f;
}

ProfileFunction ProfileFunction::piecewise_linear(
    std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2)
        throw config_error({"piecewise profile: need at least two breakpoints"});
    if (!std::is_sorted(pts.begin(), pts.end(),
                        [](const auto& l, const auto& r) { return l.first < r.first; }))
        throw config_error({"piecewise profile: breakpoints must be sorted by position"});
    ProfileFunction f;
    f.kind_ = Kind::piecewise_linear;
    f.pts_ = std::move(pts);
    return f;
}

double ProfileFunction::operator()(double s) const {
    switch (kind_) {
        case Kind::linear:
            return a_ * s;
        case Kind::sine:
            return a_ * std::sin(2.0 * std::numbers::pi * s / b_);
        case Kind::piecewise_linear: {
            if (s <= pts_.front().first) return pts_.front().second;
            if (s >= pts_.back().first) return pts_.back().second;
            auto it = std::upper_bound(
                pts_.begin(), pts_.end(), s,
                [](double v, const auto& p) { return v < p.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = (s - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
        }
    }
    return 0.0;
}

LipschitzProfiles lipschitz_profile(const ProfileFunction& phi, double lipschitz_m,
                                    double epsilon, const WindowSpec& window) {
    window.validate();
    if (lipschitz_m < 0.0) throw config_error({"Lipschitz constant must be >= 0"});
    const double se = std::sqrt(epsilon);
    if (se * lipschitz_m > 1.0)
        throw config_error({"sqrt(eps) * M exceeds 1; densities would leave [0,1]"});

    const std::int64_t n = window.n_sites();
    const std::int64_t origin = window.lattice_extent;
    LipschitzProfiles out{
        DensityProfile{std::vector<double>(static_cast<std::size_t>(n)), origin},
        constant_profile(0.5 * (1.0 + se * lipschitz_m), n, origin),
        constant_profile(0.5 * (1.0 - se * lipschitz_m), n, origin)};

    // rho(x+1) = 1/2 + eps^{-1/2} (phi(eps x) - phi(eps(x-1))) / 2 at every
    // window site (phi is defined on all of R).
    for (std::int64_t y = -origin; y <= window.lattice_extent; ++y) {
        const std::int64_t x = y - 1;
        const double inc = phi(epsilon * static_cast<double>(x)) -
                           phi(epsilon * static_cast<double>(x - 1));
        if (std::abs(inc) > lipschitz_m * epsilon * (1.0 + 1e-9)) {
            throw config_error(
                {"declared Lipschitz constant " + std::to_string(lipschitz_m) +
                 " violated by phi near s = " +
                 std::to_string(epsilon * static_cast<double>(x))});
        }
        const double rho = 0.5 + 0.5 * inc / se;
        if (rho < 0.0 || rho > 1.0)
            throw config_error({"profile density out of [0,1] (M too large for eps)"});
        out.phi.rho[static_cast<std::size_t>(y + origin)] = rho;
    }
    return out;
}

}  // namespace wasep
