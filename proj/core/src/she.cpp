#include "wasep/she.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wasep {

std::int64_t SheGrid::cell_of(double x) const {
    const auto c = static_cast<std::int64_t>(std::llround(x / dx)) + n_cells() / 2;
    if (c < 0 || c >= n_cells())
        throw config_error({"point " + std::to_string(x) + " outside the SHE grid"});
    return c;
}

void SheGrid::validate() const {
    std::vector<std::string> issues;
    if (dx <= 0.0) issues.push_back("she: dx must be positive");
    if (dt <= 0.0) issues.push_back("she: dt must be positive");
    if (extent <= 0.0) issues.push_back("she: extent must be positive");
    if (horizon < 0.0) issues.push_back("she: horizon must be >= 0");
    if (dx > 0.0 && dt > 0.5 * dx * dx)
        issues.push_back("she: stability requires dt <= dx^2/2");
    if (!issues.empty()) throw config_error(std::move(issues));
}

SheField she_initial_field(const SheGrid& grid, SheInitialData ic,
                           const SheOptions& options) {
    const std::int64_t n = grid.n_cells();
    SheField f;
    f.z.assign(static_cast<std::size_t>(n), 0.0);
    switch (ic) {
        case SheInitialData::delta:
            f.z[static_cast<std::size_t>(n / 2)] = 1.0 / grid.dx;
            break;
        case SheInitialData::brownian:
        case SheInitialData::brownian_plus_phi: {
            // Two-sided Brownian path with B(0) = 0, independent sqrt(dx)
            // increments to the right and to the left of the origin.
            Rng rng(options.brownian_seed);
            const std::int64_t mid = n / 2;
            std::vector<double> b(static_cast<std::size_t>(n), 0.0);
            const double step = std::sqrt(grid.dx);
            for (std::int64_t i = mid + 1; i < n; ++i)
                b[static_cast<std::size_t>(i)] =
                    b[static_cast<std::size_t>(i - 1)] + step * rng.normal();
            for (std::int64_t i = mid - 1; i >= 0; --i)
                b[static_cast<std::size_t>(i)] =
                    b[static_cast<std::size_t>(i + 1)] + step * rng.normal();
            const bool with_phi = ic == SheInitialData::brownian_plus_phi;
            if (with_phi && !options.phi)
                throw config_error({"she: brownian-plus-phi needs a profile function"});
            for (std::int64_t i = 0; i < n; ++i) {
                double h0 = b[static_cast<std::size_t>(i)];
                if (with_phi) h0 += (*options.phi)(grid.x_of(i));
                f.z[static_cast<std::size_t>(i)] = std::exp(-h0);
            }
            break;
        }
    }
    return f;
}

namespace {

struct Stepper {
    const SheGrid& grid;
    const SheOptions& options;
    double lap_coeff;    // dt / (2 dx^2)
    double noise_sigma;  // sqrt(dt / dx)
    std::vector<double> scratch;
    std::uint64_t clamp_events = 0;
    std::uint64_t updates = 0;

    Stepper(const SheGrid& g, const SheOptions& o)
        : grid(g),
          options(o),
          lap_coeff(0.5 * g.dt / (g.dx * g.dx)),
          noise_sigma(std::sqrt(g.dt / g.dx)),
          scratch(static_cast<std::size_t>(g.n_cells()), 0.0) {}

    // Advance one field by one step using the caller-supplied noise row.
    // Dirichlet zero boundaries live on ghost cells just outside the stored
    // field, so every stored cell keeps the positivity-preserving update
    // (convex diffusion step times a clamped factor).
    void step(std::vector<double>& z, std::span<const double> noise) {
        const std::size_t n = z.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double left = i > 0 ? z[i - 1] : 0.0;
            const double right = i + 1 < n ? z[i + 1] : 0.0;
            const double diffused = z[i] + lap_coeff * (right - 2.0 * z[i] + left);
            double factor = 1.0 - noise[i];
            if (factor < options.clamp_floor) {
                factor = options.clamp_floor;
                ++clamp_events;
            }
            const double value = diffused * factor;
            // NaN fails this comparison as well.
            if (!(value < 1e300))
                throw state_error("she: field overflow (instability); dx=" +
                                  std::to_string(grid.dx) +
                                  " dt=" + std::to_string(grid.dt));
            scratch[i] = value;
        }
        updates += n;
        z.swap(scratch);
    }
};

void fill_noise(Rng& rng, double sigma, std::vector<double>& noise, bool zero_noise) {
    if (zero_noise) {
        std::fill(noise.begin(), noise.end(), 0.0);
    } else {
        for (auto& v : noise) v = sigma * rng.normal();
    }
}

}  // namespace

SheRun integrate_she(const SheGrid& grid, std::uint64_t noise_seed, SheInitialData ic,
                     const SheOptions& options) {
    grid.validate();
    SheRun run;
    std::vector<double> z = she_initial_field(grid, ic, options).z;
    Stepper stepper(grid, options);
    Rng rng(noise_seed);
    std::vector<double> noise(z.size(), 0.0);

    auto next_snapshot = options.snapshot_times.begin();
    const std::int64_t steps = grid.n_steps();
    for (std::int64_t s = 0; s < steps; ++s) {
        fill_noise(rng, stepper.noise_sigma, noise, options.zero_noise);
        stepper.step(z, noise);
        const double t = static_cast<double>(s + 1) * grid.dt;
        while (next_snapshot != options.snapshot_times.end() &&
               *next_snapshot <= t + 1e-12) {
            run.snapshots.emplace_back(t, SheField{z});
            ++next_snapshot;
        }
    }
    run.final_field.z = std::move(z);
    run.clamp_events = stepper.clamp_events;
    run.updates = stepper.updates;
    return run;
}

std::pair<SheRun, SheRun> integrate_she_coupled(const SheGrid& grid,
                                                std::uint64_t noise_seed,
                                                SheInitialData ic1, SheInitialData ic2,
                                                const SheOptions& options) {
    grid.validate();
    SheRun run1, run2;
    std::vector<double> z1 = she_initial_field(grid, ic1, options).z;
    std::vector<double> z2 = she_initial_field(grid, ic2, options).z;
    Stepper stepper1(grid, options);
    Stepper stepper2(grid, options);
    Rng rng(noise_seed);
    std::vector<double> noise(z1.size(), 0.0);

    const std::int64_t steps = grid.n_steps();
    for (std::int64_t s = 0; s < steps; ++s) {
        // One noise row consumed by both fields: the coupling is literal.
        fill_noise(rng, stepper1.noise_sigma, noise, options.zero_noise);
        stepper1.step(z1, noise);
        stepper2.step(z2, noise);
    }
    run1.final_field.z = std::move(z1);
    run1.clamp_events = stepper1.clamp_events;
    run1.updates = stepper1.updates;
    run2.final_field.z = std::move(z2);
    run2.clamp_events = stepper2.clamp_events;
    run2.updates = stepper2.updates;
    return {std::move(run1), std::move(run2)};
}

std::vector<double> log_field(const SheField& field) {
    std::vector<double> h(field.z.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(field.z[i] > 0.0))
            throw state_error("log_field: nonpositive value signals instability");
        h[i] = -std::log(field.z[i]);
    }
    return h;
}

}  // namespace wasep
