#include "cbm/optimal_policy.hpp"

#include <cmath>
#include <limits>

namespace cbm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_t(const ModelParams& pr, double t) {
    return std::min(pr.tau, std::max(0.0, t));
}

// Threshold for perfect repairs: e^{m t*} = (M - c_so) / (M - c_uso) with
// M = mu1*c_cm/m. Falls back to golden-section minimization of the
// perfect-maintenance cost when the log formula is undefined.
double t_star_perfect(const ModelParams& pr) {
    const double m = pr.mu1 + pr.mu2;
    const double big_m = pr.mu1 * pr.c_cm / m;
    if (big_m > pr.c_pm_uso)
        return std::log((big_m - pr.c_pm_so) / (big_m - pr.c_pm_uso)) / m;
    // Golden-section search on [0, tau]; the cost is unimodal here.
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = pr.tau;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = cost_rate_perfect(pr, x1).total, f2 = cost_rate_perfect(pr, x2).total;
    while (b - a > 1e-12) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = cost_rate_perfect(pr, x1).total;
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = cost_rate_perfect(pr, x2).total;
        }
    }
    return 0.5 * (a + b);
}

CostBreakdown regime_cost(const ModelParams& pr, Regime regime, double t_hat) {
    switch (regime) {
        case Regime::NeverPM: return cost_rate_only_cm(pr);
        case Regime::SOOnly: return cost_rate_only_so(pr);
        case Regime::USOOnly: return cost_rate_only_uso(pr);
        case Regime::SOAndUSOAlways:
        case Regime::Both: return cost_rate_control_limit(pr, 0.0);
        case Regime::SOAndUSOThreshold: return cost_rate_control_limit(pr, t_hat);
    }
    throw NumericError("unreachable regime");
}

}  // namespace

double threshold_residual(const ModelParams& pr, double t) {
    const double m = pr.mu1 + pr.mu2;
    const double b = pr.lambda * pr.p;
    const double big_m = pr.mu1 * pr.c_cm / m;
    const double a = (pr.mu1 * pr.c_cm + pr.lambda * pr.c_pm_uso) / (m + b);
    const double boundary =
        (-pr.c_pm_so + big_m + (pr.c_pm_uso / pr.p - big_m) * std::exp(m * t)) / (1.0 - pr.p);
    return pr.c_pm_uso / pr.p - (a + (boundary - a) * std::exp((m + b) * (pr.tau - t)));
}

ThresholdRoot solve_t_star(const ModelParams& pr) {
    if (pr.p >= 1.0) {
        const double raw = t_star_perfect(pr);
        return {raw, clamp_t(pr, raw), {raw}};
    }
    constexpr int kScan = 3000;
    const double lo = -pr.tau, hi = 2.0 * pr.tau;
    std::vector<double> roots;
    double prev_t = lo, prev_v = threshold_residual(pr, lo);
    for (int i = 1; i <= kScan; ++i) {
        const double t = lo + (hi - lo) * i / kScan;
        const double v = threshold_residual(pr, t);
        if (prev_v == 0.0) {
            roots.push_back(prev_t);
        } else if (prev_v * v < 0.0) {
            double a = prev_t, b = t, fa = prev_v;
            while (b - a > 1e-10) {
                const double mid = 0.5 * (a + b);
                const double fm = threshold_residual(pr, mid);
                if (fm == 0.0) { a = b = mid; break; }
                if (fa * fm < 0.0) b = mid;
                else { a = mid; fa = fm; }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev_v = v;
    }
    if (roots.empty())
        throw NoRootInBracket("threshold equation has no sign change on [-tau, 2*tau]");
    return {roots.front(), clamp_t(pr, roots.front()), roots};
}

OptimalPolicyResult classify_optimal(const ModelParams& pr) {
    const double m = pr.mu1 + pr.mu2;
    const double lhs = pr.mu1 * pr.c_cm;

    if (pr.c_pm_so < pr.c_pm_uso) {
        if (lhs <= m * pr.c_pm_so / pr.p) {
            return {Regime::NeverPM, CostOrdering::SoBelowUso, std::nullopt, kNaN,
                    cost_rate_only_cm(pr)};
        }
        const double so_only_bound =
            (pr.c_pm_uso / pr.p -
             (pr.c_pm_uso - pr.c_pm_so) / (std::exp(m * pr.tau) - 1.0)) * m;
        if (lhs <= so_only_bound) {
            return {Regime::SOOnly, CostOrdering::SoBelowUso, std::nullopt, kNaN,
                    cost_rate_only_so(pr)};
        }
        // Just above the SO-only bound the threshold equation can have no root
        // on the bracket (the residual stays negative, so repairing at a USO is
        // never worthwhile at any remaining time). The minimizer then sits at
        // the boundary t_tilde = tau, which is the SO-only policy.
        try {
            const ThresholdRoot root = solve_t_star(pr);
            if (root.t_hat >= pr.tau) {
                return {Regime::SOOnly, CostOrdering::SoBelowUso, std::nullopt,
                        root.t_star_raw, cost_rate_only_so(pr)};
            }
            const Regime regime =
                root.t_hat > 0.0 ? Regime::SOAndUSOThreshold : Regime::SOAndUSOAlways;
            return {regime, CostOrdering::SoBelowUso, root.t_hat, root.t_star_raw,
                    cost_rate_control_limit(pr, root.t_hat)};
        } catch (const NoRootInBracket&) {
            return {Regime::SOOnly, CostOrdering::SoBelowUso, std::nullopt, kNaN,
                    cost_rate_only_so(pr)};
        }
    }

    if (pr.c_pm_so == pr.c_pm_uso) {
        if (lhs > m * pr.c_pm_so / pr.p) {
            return {Regime::Both, CostOrdering::Equal, 0.0, kNaN,
                    cost_rate_control_limit(pr, 0.0)};
        }
        return {Regime::NeverPM, CostOrdering::Equal, std::nullopt, kNaN,
                cost_rate_only_cm(pr)};
    }

    // c_pm_so > c_pm_uso: repair at USOs when worthwhile; additionally at SOs
    // when the stronger condition holds. The SO condition implies the USO one.
    const bool uso_repair = lhs > m * pr.c_pm_uso / pr.p;
    const bool so_repair =
        lhs > m * pr.c_pm_so / pr.p + pr.lambda * (pr.c_pm_so - pr.c_pm_uso);
    if (so_repair) {
        return {Regime::Both, CostOrdering::SoAboveUso, 0.0, kNaN,
                cost_rate_control_limit(pr, 0.0)};
    }
    if (uso_repair) {
        return {Regime::USOOnly, CostOrdering::SoAboveUso, std::nullopt, kNaN,
                cost_rate_only_uso(pr)};
    }
    return {Regime::NeverPM, CostOrdering::SoAboveUso, std::nullopt, kNaN,
            cost_rate_only_cm(pr)};
}

CostBreakdown optimal_cost(const ModelParams& pr) {
    const OptimalPolicyResult res = classify_optimal(pr);
    return regime_cost(pr, res.regime, res.t_hat.value_or(0.0));
}

std::vector<DeltaPoint> delta_p(const ModelParams& pr, const std::vector<double>& p_grid) {
    ModelParams perfect = pr;
    perfect.p = 1.0;
    const double base = optimal_cost(perfect).total;
    std::vector<DeltaPoint> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        if (!(p > 0.0 && p <= 1.0)) throw DomainError("p", "sweep p must lie in (0, 1]");
        ModelParams cur = pr;
        cur.p = p;
        const OptimalPolicyResult res = classify_optimal(cur);
        double t_hat;
        switch (res.regime) {
            case Regime::SOAndUSOThreshold:
            case Regime::SOAndUSOAlways:
            case Regime::Both: t_hat = res.t_hat.value_or(0.0); break;
            case Regime::SOOnly: t_hat = pr.tau; break;  // USO repair never used
            case Regime::USOOnly:
            case Regime::NeverPM: t_hat = kNaN; break;
        }
        out.push_back({p, 100.0 * (res.cost.total - base) / base, t_hat});
    }
    return out;
}

std::vector<double> default_p_grid() {
    std::vector<double> grid;
    for (int i = 50; i <= 100; ++i) grid.push_back(i / 100.0);
    return grid;
}

}  // namespace cbm
