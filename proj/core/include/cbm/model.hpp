#pragma once

#include <stdexcept>
#include <string>

namespace cbm {

// Raised when an input value is outside the model's domain. `field` names the
// offending parameter so the CLI can report it.
struct DomainError : std::invalid_argument {
    std::string field;
    DomainError(std::string f, const std::string& msg)
        : std::invalid_argument(msg), field(std::move(f)) {}
};

// Raised when a numeric routine (root bracketing, quadrature) cannot meet its
// contract.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Three-state degrading asset: perfect (2) -> satisfactory (1) -> failed.
// Sojourns are exponential with rates mu2 and mu1; scheduled opportunities
// (SOs) occur every tau years; unscheduled opportunities (USOs) arrive
// Poisson(lambda). Preventive maintenance is perfect with probability p and
// leaves the state unchanged otherwise. All rates are per year, costs in
// currency units.
struct ModelParams {
    double mu2;
    double mu1;
    double lambda;
    double p;
    double tau;
    double c_cm;
    double c_pm_so;
    double c_pm_uso;
};

// Checks all domain invariants and returns the record unchanged.
// Throws DomainError naming the violated field.
ModelParams validate(const ModelParams& params);

enum class PolicyKind { NeverPM, OnlySO, OnlyUSO, ControlLimit };

// A maintenance policy. For ControlLimit, repair in state 1 at every SO and
// at any USO whose remaining time to the next SO exceeds t_tilde. The defer
// flag reschedules the next SO to tau after every successful maintenance
// (successful PM or corrective replacement).
struct Policy {
    PolicyKind kind = PolicyKind::NeverPM;
    double t_tilde = 0.0;  // meaningful for ControlLimit only
    bool defer = false;

    bool operator==(const Policy&) const = default;
};

Policy policy_never(bool defer = false);
Policy policy_only_so(bool defer = false);
Policy policy_only_uso(bool defer = false);

// t_tilde must lie in [0, tau]; the tau bound is checked at use sites where a
// ModelParams is available (see check_policy).
Policy policy_control_limit(double t_tilde, bool defer = false);

// Validates a policy against a parameter set (range check on t_tilde).
void check_policy(const ModelParams& params, const Policy& policy);

// Long-run cost rate split by action type. total is kept explicitly so a
// serialized breakdown is self-contained.
struct CostBreakdown {
    double so_pm = 0.0;
    double uso_pm = 0.0;
    double cm = 0.0;
    double total = 0.0;

    static CostBreakdown of(double so_pm, double uso_pm, double cm) {
        return {so_pm, uso_pm, cm, so_pm + uso_pm + cm};
    }
};

// Upper bound on the optimal long-run cost rate: the cost of running to
// failure and replacing correctively.
inline double cm_only_rate_bound(const ModelParams& pr) {
    return pr.c_cm * pr.mu1 * pr.mu2 / (pr.mu1 + pr.mu2);
}

}  // namespace cbm
