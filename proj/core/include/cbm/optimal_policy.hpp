#pragma once

#include <optional>
#include <vector>

#include "cbm/closed_form.hpp"
#include "cbm/model.hpp"

namespace cbm {

// Thrown by solve_t_star when the threshold equation has no sign change on
// the search bracket (usually a sign of regime misclassification upstream).
struct NoRootInBracket : NumericError {
    using NumericError::NumericError;
};

enum class Regime {
    NeverPM,             // corrective replacement only
    SOOnly,              // repair in state 1 at SOs only
    SOAndUSOThreshold,   // SOs plus USOs with remaining time > t_hat
    SOAndUSOAlways,      // SOs plus every USO (threshold clamps to 0)
    USOOnly,             // USOs only (c_pm_so > c_pm_uso branch)
    Both,                // SOs and every USO (equal-cost or c_so > c_uso branch)
};

enum class CostOrdering { SoBelowUso, Equal, SoAboveUso };

struct OptimalPolicyResult {
    Regime regime;
    CostOrdering ordering;
    std::optional<double> t_hat;  // present for threshold-style regimes
    double t_star_raw;            // unclamped root (NaN when not applicable)
    CostBreakdown cost;
};

struct ThresholdRoot {
    double t_star_raw;
    double t_hat;                       // min{tau, max{0, t_star_raw}}
    std::vector<double> sign_changes;   // all roots found on the bracket (diagnostic)
};

// Determines the optimal policy family for the given parameters, dispatching
// on the ordering of the two preventive costs. Non-strict inequality ties
// break toward doing nothing.
OptimalPolicyResult classify_optimal(const ModelParams& params);

// Solves the interior-threshold equation by bracketed bisection on
// [-tau, 2*tau] (absolute tolerance 1e-10). Only meaningful in the
// threshold regime of the c_pm_so < c_pm_uso ordering.
ThresholdRoot solve_t_star(const ModelParams& params);

// Residual of the threshold equation (zero at t*). Exposed for verification.
double threshold_residual(const ModelParams& params, double t);

// Cost of the optimal policy (closed-form evaluation of classify_optimal's
// choice).
CostBreakdown optimal_cost(const ModelParams& params);

struct DeltaPoint {
    double p;
    double delta_percent;  // relative extra cost vs the perfect-repair optimum
    double t_hat;          // optimal threshold at this p (tau when USO repair is never used)
};

// Sweep of the imperfect-maintenance cost penalty
// delta(p) = 100 * (C_opt(p) - C_opt(1)) / C_opt(1).
std::vector<DeltaPoint> delta_p(const ModelParams& params, const std::vector<double>& p_grid);

// Default sweep grid {0.50, 0.51, ..., 1.00}.
std::vector<double> default_p_grid();

}  // namespace cbm
