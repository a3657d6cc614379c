#pragma once

#include "cbm/model.hpp"

namespace cbm {

// Thrown when the adaptive quadrature cannot meet its error target.
struct QuadratureError : NumericError {
    using NumericError::NumericError;
};

// Conditional first-interval quantities given the residual time y from the
// state change to the next SO. The interval ends at the first successful
// maintenance or at the (possibly unsuccessful) SO; the three events
// {successful USO repair, reach the SO, corrective replacement} partition the
// outcomes. Lengths are expectations of the time from the state change to the
// ending event restricted to that event; costs include the unsuccessful USO
// repairs attempted on the way.
struct CycleConditionals {
    double y;
    double p_so, p_uso, p_cm;
    double el_uso, el_so, el_cm;
    double ec_uso, ec_so, ec_cm;
};

CycleConditionals cycle_conditionals(const ModelParams& params, double t_tilde, double y);

// Renewal-reward evaluation of the control-limit policy with deferral: cycles
// run between successful maintenances; the residual time Y to the first SO is
// truncated-exponential, unsuccessful SOs start geometric full-length stages.
struct DeferralResult {
    double cycle_cost;    // expected cost per regeneration cycle
    double cycle_length;  // expected cycle length (includes the 1/mu2 sojourn)
    double rate;          // cycle_cost / cycle_length
    double p_u;           // per-stage probability of no successful maintenance

    // decomposition of the post-state-change length/cost by whether the cycle
    // ends within the first interval (diagnostics for the simulator cross-check)
    double len_first, len_rest;
    double cost_first, cost_rest;
};

DeferralResult cost_rate_deferral(const ModelParams& params, double t_tilde);

// Grid argmin of the deferral cost rate over {0, step, ..., tau}; ties go to
// the smallest threshold.
struct DeferralOptimum {
    double t_tilde;
    double rate;
};
DeferralOptimum optimize_deferral_threshold(const ModelParams& params, double grid_step);

}  // namespace cbm
