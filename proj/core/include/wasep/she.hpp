#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wasep/errors.hpp"
#include "wasep/initial_conditions.hpp"
#include "wasep/rng.hpp"

namespace wasep {

// Explicit Euler grid for the multiplicative stochastic heat equation
//   dZ = (1/2) Z_xx dt - Z dW,   dW ~ N(0, dt/dx) per cell per step,
// on [-extent, extent] with Dirichlet zero boundaries.
struct SheGrid {
    double dx = 0.05;
    double dt = 1e-3;
    double extent = 6.0;   // X; cells at x = -X, -X+dx, ..., X
    double horizon = 1.0;  // T

    std::int64_t n_cells() const {
        return 2 * static_cast<std::int64_t>(std::llround(extent / dx)) + 1;
    }
    std::int64_t n_steps() const {
        return static_cast<std::int64_t>(std::llround(horizon / dt));
    }
    std::int64_t cell_of(double x) const;  // nearest cell; throws when outside
    double x_of(std::int64_t cell) const {
        return (static_cast<double>(cell) - static_cast<double>(n_cells() / 2)) * dx;
    }
    // Stability dt <= dx^2 / 2 and positive sizes.
    void validate() const;
};

enum class SheInitialData { delta, brownian, brownian_plus_phi };

struct SheOptions {
    bool zero_noise = false;          // deterministic heat-equation mode
    double clamp_floor = 1e-6;        // floor for the factor (1 - dW)
    std::uint64_t brownian_seed = 0;  // seed' for the Brownian initial path
    std::optional<ProfileFunction> phi;  // for brownian_plus_phi
    std::vector<double> snapshot_times;  // optional trajectory sampling
};

struct SheField {
    std::vector<double> z;  // Z(t, x_i) >= 0 on the grid
};

struct SheRun {
    SheField final_field;
    std::vector<std::pair<double, SheField>> snapshots;
    std::uint64_t clamp_events = 0;
    std::uint64_t updates = 0;

    double clamp_fraction() const {
        return updates == 0 ? 0.0
                            : static_cast<double>(clamp_events) /
                                  static_cast<double>(updates);
    }
};

// Build the initial field: delta as 1/dx at the origin cell; Brownian data
// as Z = exp(-B) (plus exp(-phi) in the perturbed mode) with B a two-sided
// standard Brownian motion sampled from options.brownian_seed.
SheField she_initial_field(const SheGrid& grid, SheInitialData ic,
                           const SheOptions& options);

// One trajectory. The update diffuses explicitly and then multiplies by the
// clamped noise factor max(1 - dW, clamp_floor), which keeps the field
// strictly positive; clamp events are counted. Aborts with state_error on
// overflow (instability).
SheRun integrate_she(const SheGrid& grid, std::uint64_t noise_seed, SheInitialData ic,
                     const SheOptions& options);

// Shared-noise mode: two initial data evolved with identical dW draws, the
// continuum analogue of the basic coupling.
std::pair<SheRun, SheRun> integrate_she_coupled(const SheGrid& grid,
                                                std::uint64_t noise_seed,
                                                SheInitialData ic1, SheInitialData ic2,
                                                const SheOptions& options);

// H = -log Z pointwise; throws state_error on nonpositive values.
std::vector<double> log_field(const SheField& field);

}  // namespace wasep
