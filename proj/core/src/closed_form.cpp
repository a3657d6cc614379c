#include "cbm/closed_form.hpp"

#include <cmath>

namespace cbm {

namespace {

struct Rates {
    double m;  // mu1 + mu2
    double b;  // lambda * p
    double s;  // m + b
};

Rates rates(const ModelParams& pr) {
    const double m = pr.mu1 + pr.mu2;
    const double b = pr.lambda * pr.p;
    return {m, b, m + b};
}

void check_t_tilde(const ModelParams& pr, double t_tilde) {
    if (!(t_tilde >= 0.0 && t_tilde <= pr.tau))
        throw DomainError("t_tilde", "t_tilde must lie in [0, tau]");
}

}  // namespace

double StationaryProfile::p1(double t) const {
    const auto [m, b, s] = rates(params);
    if (t < t_tilde) return params.mu2 / m + c1 * std::exp(m * t);
    return params.mu2 / s + c2 * std::exp(s * t);
}

double StationaryProfile::p1_at_zero() const {
    const auto [m, b, s] = rates(params);
    // With t_tilde = 0 the first branch is empty and c1 is unused.
    if (t_tilde > 0.0) return params.mu2 / m + c1;
    return params.mu2 / s + c2;
}

StationaryProfile stationary_profile(const ModelParams& pr, double t_tilde) {
    check_t_tilde(pr, t_tilde);
    if (pr.p >= 1.0)
        throw DomainError("p", "stationary_profile requires p < 1; use the perfect-maintenance path");
    const auto [m, b, s] = rates(pr);
    const double ip = 1.0 / (1.0 - pr.p);
    const double emt = std::exp(-m * t_tilde);
    const double c2 = ((pr.mu2 / m) * (1.0 - emt) - (pr.mu2 / s) * (ip - emt)) /
                      (ip * std::exp(s * pr.tau) - std::exp(b * t_tilde));
    const double c1 = c2 * std::exp(b * t_tilde) - (pr.mu2 / m) * (b / s) * emt;
    return {pr, t_tilde, c1, c2};
}

namespace {

// Shared evaluation once the profile constants are known; also used for the
// perfect-maintenance case, whose p1 has the same piecewise-exponential shape
// with c2 = -(mu2/s) e^{-s tau}.
CostBreakdown cost_from_constants(const ModelParams& pr, double t_tilde, double c1, double c2) {
    const auto [m, b, s] = rates(pr);
    // Analytic integrals of p1 over [0, t_tilde) and [t_tilde, tau).
    const double i1 =
        t_tilde > 0.0 ? pr.mu2 / m * t_tilde + c1 / m * (std::exp(m * t_tilde) - 1.0) : 0.0;
    const double i2 = pr.mu2 / s * (pr.tau - t_tilde) +
                      c2 / s * (std::exp(s * pr.tau) - std::exp(s * t_tilde));
    const double p10 = t_tilde > 0.0 ? pr.mu2 / m + c1 : pr.mu2 / s + c2;
    return CostBreakdown::of(pr.c_pm_so * p10 / pr.tau,
                             pr.c_pm_uso * pr.lambda * i2 / pr.tau,
                             pr.c_cm * pr.mu1 * (i1 + i2) / pr.tau);
}

}  // namespace

CostBreakdown cost_rate_control_limit(const ModelParams& pr, double t_tilde) {
    check_t_tilde(pr, t_tilde);
    if (t_tilde >= pr.tau) return cost_rate_only_so(pr);
    if (pr.p >= 1.0) return cost_rate_perfect(pr, t_tilde);
    const StationaryProfile prof = stationary_profile(pr, t_tilde);
    return cost_from_constants(pr, t_tilde, prof.c1, prof.c2);
}

CostBreakdown cost_rate_only_so(const ModelParams& pr) {
    const double m = pr.mu1 + pr.mu2;
    const double e = std::exp(m * pr.tau);
    const double den = e - 1.0 + pr.p;
    const double p10 = pr.mu2 / m * (1.0 - pr.p / den);
    const double integral = pr.mu2 / m * (pr.tau - pr.p * (e - 1.0) / (m * den));
    return CostBreakdown::of(pr.c_pm_so * p10 / pr.tau, 0.0,
                             pr.c_cm * pr.mu1 * integral / pr.tau);
}

CostBreakdown cost_rate_only_uso(const ModelParams& pr) {
    const double den = pr.lambda * pr.p + pr.mu1 + pr.mu2;
    return CostBreakdown::of(0.0, pr.c_pm_uso * pr.lambda * pr.mu2 / den,
                             pr.c_cm * pr.mu1 * pr.mu2 / den);
}

CostBreakdown cost_rate_only_cm(const ModelParams& pr) {
    return CostBreakdown::of(0.0, 0.0, cm_only_rate_bound(pr));
}

CostBreakdown cost_rate_perfect(const ModelParams& pr, double t_tilde) {
    check_t_tilde(pr, t_tilde);
    if (pr.p != 1.0) throw DomainError("p", "cost_rate_perfect requires p = 1");
    if (t_tilde >= pr.tau) return cost_rate_only_so(pr);
    const auto [m, b, s] = rates(pr);
    // Perfect maintenance empties state 1 at each SO: p1(tau-) = 0.
    const double c2 = -(pr.mu2 / s) * std::exp(-s * pr.tau);
    const double c1 = c2 * std::exp(b * t_tilde) - (pr.mu2 / m) * (b / s) * std::exp(-m * t_tilde);
    return cost_from_constants(pr, t_tilde, c1, c2);
}

CostBreakdown cost_rate_policy(const ModelParams& pr, const Policy& policy) {
    check_policy(pr, policy);
    switch (policy.kind) {
        case PolicyKind::NeverPM:
            return cost_rate_only_cm(pr);
        case PolicyKind::OnlySO:
            return cost_rate_only_so(pr);
        case PolicyKind::OnlyUSO:
            return cost_rate_only_uso(pr);
        case PolicyKind::ControlLimit:
            return cost_rate_control_limit(pr, policy.t_tilde);
    }
    throw NumericError("unreachable policy kind");
}

}  // namespace cbm
