#pragma once

#include "cbm/model.hpp"

namespace cbm {

// Stationary probability of occupying the satisfactory state within one SO
// period, for a control-limit policy without deferral. p1 is piecewise
// exponential: mu2/m + c1*e^{m t} on [0, t_tilde) and mu2/s + c2*e^{s t} on
// [t_tilde, tau), with m = mu1+mu2, s = m + lambda*p. The constants are fixed
// by continuity at t_tilde and the boundary condition (1-p)*p1(0) = p1(tau-).
struct StationaryProfile {
    ModelParams params;
    double t_tilde;
    double c1;
    double c2;

    double p1(double t) const;
    double p1_at_zero() const;
};

// Requires p < 1 (the constant c2 carries a 1/(1-p) factor); p = 1 callers
// must use the perfect-maintenance path.
StationaryProfile stationary_profile(const ModelParams& params, double t_tilde);

// Long-run cost rate of the control-limit policy without deferral.
// Dispatches to cost_rate_perfect when p = 1 and to cost_rate_only_so when
// t_tilde = tau; integrals of p1 are evaluated analytically.
CostBreakdown cost_rate_control_limit(const ModelParams& params, double t_tilde);

// Repair in state 1 at SOs only (lambda is ignored).
CostBreakdown cost_rate_only_so(const ModelParams& params);

// Repair in state 1 at USOs only (no SO grid; tau is ignored).
CostBreakdown cost_rate_only_uso(const ModelParams& params);

// Run to failure; corrective replacement only.
CostBreakdown cost_rate_only_cm(const ModelParams& params);

// Control-limit cost rate under perfect maintenance (p = 1); throws
// DomainError otherwise.
CostBreakdown cost_rate_perfect(const ModelParams& params, double t_tilde);

// Cost rate of an arbitrary non-deferral policy (dispatch helper).
CostBreakdown cost_rate_policy(const ModelParams& params, const Policy& policy);

}  // namespace cbm
