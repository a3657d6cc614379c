#include "cbm/model.hpp"

#include <cmath>

namespace cbm {

namespace {

void require(bool ok, const char* field, const std::string& msg) {
    if (!ok) throw DomainError(field, msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ModelParams validate(const ModelParams& pr) {
    require(finite(pr.mu1) && pr.mu1 > 0, "mu1", "mu1 must be positive");
    require(finite(pr.mu2) && pr.mu2 > 0, "mu2", "mu2 must be positive");
    require(finite(pr.lambda) && pr.lambda >= 0, "lambda", "lambda must be nonnegative");
    require(finite(pr.p) && pr.p > 0 && pr.p <= 1, "p", "p must lie in (0, 1]");
    require(finite(pr.tau) && pr.tau > 0, "tau", "tau must be positive");
    require(finite(pr.c_cm) && pr.c_cm > 0, "c_cm", "c_cm must be positive");
    require(finite(pr.c_pm_so) && pr.c_pm_so > 0, "c_pm_so", "c_pm_so must be positive");
    require(finite(pr.c_pm_uso) && pr.c_pm_uso > 0, "c_pm_uso", "c_pm_uso must be positive");
    return pr;
}

Policy policy_never(bool defer) { return {PolicyKind::NeverPM, 0.0, defer}; }
Policy policy_only_so(bool defer) { return {PolicyKind::OnlySO, 0.0, defer}; }
Policy policy_only_uso(bool defer) { return {PolicyKind::OnlyUSO, 0.0, defer}; }

Policy policy_control_limit(double t_tilde, bool defer) {
    if (!std::isfinite(t_tilde) || t_tilde < 0)
        throw DomainError("t_tilde", "t_tilde must be nonnegative");
    return {PolicyKind::ControlLimit, t_tilde, defer};
}

void check_policy(const ModelParams& pr, const Policy& policy) {
    if (policy.kind == PolicyKind::ControlLimit) {
        if (!(policy.t_tilde >= 0 && policy.t_tilde <= pr.tau))
            throw DomainError("t_tilde", "t_tilde must lie in [0, tau]");
    }
}

}  // namespace cbm
