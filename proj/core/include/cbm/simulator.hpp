#pragma once

#include <cstdint>
#include <vector>

#include "cbm/model.hpp"

namespace cbm {

struct SimConfig {
    double horizon = 1e5;   // simulated years per replication
    int replications = 20;
    std::uint64_t seed = 1;
};

// Event tallies per simulated year, averaged over replications.
struct EventRates {
    double cm = 0.0;
    double so_success = 0.0;
    double so_fail = 0.0;
    double uso_success = 0.0;
    double uso_fail = 0.0;
};

struct SimEstimate {
    double rate;      // mean cost per year
    double std_err;   // standard error across replications
    double ci95;      // 1.96 * std_err
    EventRates counts;
};

// Event-driven Monte Carlo estimate of the long-run cost rate under any
// policy. Fully deterministic for a given (params, policy, config): each
// replication runs its own counter-derived random stream, so results do not
// depend on scheduling.
SimEstimate simulate(const ModelParams& params, const Policy& policy, const SimConfig& config);

// Per-regeneration-cycle statistics under the control-limit policy with
// deferral (cycles run between successful maintenances), plus samples of the
// residual time from the state change to the next SO for distribution checks.
struct CycleStats {
    double mean_length = 0.0;
    double se_length = 0.0;
    double mean_cost = 0.0;
    double se_cost = 0.0;
    std::uint64_t cycles = 0;
    std::vector<double> y_samples;
};

CycleStats simulate_cycle_stats(const ModelParams& params, double t_tilde,
                                const SimConfig& config);

}  // namespace cbm
