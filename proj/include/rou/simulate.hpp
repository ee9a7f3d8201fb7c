#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "rou/model.hpp"

namespace rou {

enum class StartMode {
    Fixed,       // every path starts at x0
    Stationary,  // x0 drawn per path from the invariant law (one-sided only)
};

struct SimConfig {
    OUParams params;
    BoundarySpec boundary;
    double x0 = 0.0;
    double dt = 1e-3;
    double horizon = 1.0;
    std::uint64_t seed = 0;
    // When false, simulate_path keeps only the first and last grid points.
    bool record_full_path = true;
    StartMode start = StartMode::Fixed;
};

// Throws InvalidConfig (x0 outside the boundaries, dt >= horizon, bad start
// mode) or UnstableStep (dt > 0.1/gamma).
void validate(const SimConfig& config);

// floor(horizon/dt); the simulated horizon is steps * dt.
std::size_t step_count(const SimConfig& config);

struct StepResult {
    double y = 0.0;
    double dl = 0.0;
    double du = 0.0;
};

// Projection onto the reflection domain. The barrier value itself is written
// on contact, so complementarity holds with exact equality. A step whose
// increment is wider than a two-sided interval throws StepSpansInterval.
StepResult reflect_step(double y, double increment, const BoundarySpec& boundary);

// Projected Euler scheme
//   y[k+1] = Proj(y[k] + (alpha - gamma y[k]) dt + sigma sqrt(dt) xi_k),
// xi_k standard normals from the stream seeded by config.seed.
ReflectedPath simulate_path(const SimConfig& config);

// ---------------------------------------------------------------------------
// Coupled multi-level runs.
//
// The projected scheme under-counts boundary local time by O(sqrt(dt)). A
// coupled run advances `levels` copies of the scheme with steps dt, dt/4,
// dt/16, ... driven by one Brownian path (coarse increments are sums of fine
// ones), so that per-path statistics can be extrapolated to dt -> 0 with
// richardson_weights(). With levels = 1 the single level reproduces
// simulate_path bit-for-bit.

struct Observation {
    // Times at which (y, l, u) are recorded, rounded to the coarse grid.
    std::vector<double> checkpoints;
    // Start of the trapezoidal time-average window of y; negative disables it.
    double average_from = -1.0;
    // When set, the time average is taken of f(y) instead of y.
    std::function<double(double)> average_of;
};

struct LevelTrace {
    double dt = 0.0;
    std::vector<double> y;
    std::vector<double> l;
    std::vector<double> u;
    double time_average = std::numeric_limits<double>::quiet_NaN();
};

struct CoupledSample {
    std::uint64_t seed = 0;
    double x0 = 0.0;
    std::vector<LevelTrace> levels;  // coarsest first
};

CoupledSample simulate_coupled(const SimConfig& config, int levels, const Observation& observe);

// Weights w_j with sum_j w_j r_j^p = [p == 0] for p < levels, r_j = 2^-j:
// they cancel the sqrt(dt), dt, ... terms of a per-level expansion in sqrt(dt).
// {1}, {-1, 2}, {1/3, -2, 8/3}, ...
std::vector<double> richardson_weights(int levels);

// ---------------------------------------------------------------------------
// Batches. Path i always uses path_seed(master_seed, i); results are stored by
// index, so they do not depend on the number of workers.

struct TerminalSummary {
    std::size_t path_index = 0;
    double y_T = 0.0;
    double l_T = 0.0;
    double u_T = 0.0;

    friend bool operator==(const TerminalSummary&, const TerminalSummary&) = default;
};

struct BatchOptions {
    unsigned workers = 0;  // 0: hardware concurrency
};

std::vector<TerminalSummary> batch_simulate(const SimConfig& config, std::size_t n_paths,
                                            std::uint64_t master_seed,
                                            const BatchOptions& options = {});

std::vector<CoupledSample> batch_coupled(const SimConfig& config, std::size_t n_paths,
                                         std::uint64_t master_seed, int levels,
                                         const Observation& observe,
                                         const BatchOptions& options = {});

// CSV with header `path_index,y_T,l_T,u_T`.
void write_summaries_csv(const std::vector<TerminalSummary>& summaries, std::ostream& out);

}  // namespace rou
