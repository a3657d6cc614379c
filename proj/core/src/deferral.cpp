#include "cbm/deferral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace cbm {

namespace {

void check_t_tilde(const ModelParams& pr, double t_tilde) {
    if (!(t_tilde >= 0.0 && t_tilde <= pr.tau))
        throw DomainError("t_tilde", "t_tilde must lie in [0, tau]");
}

// E[min(T_a, x) 1{T_a <= x}] building block for an Exp(a) variable:
// integral of a t e^{-a t} over [0, x].
double trunc_mean(double a, double x) {
    return (1.0 - std::exp(-a * x) * (1.0 + a * x)) / a;
}

}  // namespace

CycleConditionals cycle_conditionals(const ModelParams& pr, double t_tilde, double y) {
    check_t_tilde(pr, t_tilde);
    if (!(y >= 0.0 && y <= pr.tau))
        throw DomainError("y", "y must lie in [0, tau]");
    const double a = pr.mu1;          // failure rate in state 1
    const double b = pr.lambda * pr.p;  // rate of successful USO repairs
    const double s = a + b;
    const double w = std::max(y - t_tilde, 0.0);  // USO-repair window length
    const double lq = pr.lambda * (1.0 - pr.p);   // unsuccessful-USO cost rate

    CycleConditionals c{};
    c.y = y;
    double extra_cm;  // E[min(T_a, w) restricted to the CM outcome]
    if (y < t_tilde) {
        c.p_so = std::exp(-a * y);
        c.p_uso = 0.0;
        c.el_uso = 0.0;
        c.el_cm = trunc_mean(a, y);
        extra_cm = 0.0;
    } else {
        c.p_so = std::exp(-a * y - b * w);
        c.p_uso = b > 0.0 ? (b / s) * (1.0 - std::exp(-s * w)) : 0.0;
        c.el_uso = b > 0.0 ? (b / s) * trunc_mean(s, w) : 0.0;
        // Failure before y and before any successful USO repair in its window.
        const double sub = b * (trunc_mean(s, w) / s + (1.0 - std::exp(-s * w)) / (a * s)) -
                           (y + 1.0 / a) * std::exp(-a * y) * (1.0 - std::exp(-b * w));
        c.el_cm = trunc_mean(a, y) - sub;
        const double first =
            trunc_mean(a, w) + w * (std::exp(-a * w) - std::exp(-a * y));
        const double second =
            b * (trunc_mean(s, w) / s + (1.0 - std::exp(-s * w)) / (a * s)) -
            (std::exp(-a * w) / a + w * std::exp(-a * y)) * (1.0 - std::exp(-b * w));
        extra_cm = first - second;
    }
    c.p_cm = 1.0 - c.p_so - c.p_uso;
    c.el_so = y * pr.p * c.p_so;
    c.ec_uso = pr.c_pm_uso * c.p_uso + lq * pr.c_pm_uso * c.el_uso;
    c.ec_so = (pr.c_pm_so + lq * pr.c_pm_uso * w) * c.p_so;
    c.ec_cm = pr.c_cm * c.p_cm + lq * pr.c_pm_uso * extra_cm;
    return c;
}

DeferralResult cost_rate_deferral(const ModelParams& pr, double t_tilde) {
    check_t_tilde(pr, t_tilde);
    const double q = 1.0 - pr.p;
    const double z = 1.0 - std::exp(-pr.mu2 * pr.tau);
    const auto f_y = [&](double y) {
        return pr.mu2 * std::exp(-pr.mu2 * (pr.tau - y)) / z;
    };

    // Outer integral against the residual-time density, split at t_tilde
    // where the integrands are only piecewise smooth.
    constexpr double kTol = 1e-8;
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto integ = [&](auto&& f) {
        const double split = std::min(t_tilde, pr.tau);
        double total = 0.0, err_sum = 0.0, err = 0.0;
        if (split > 0.0) {
            total += gk::integrate([&](double y) { return f(y) * f_y(y); }, 0.0, split, 15,
                                   kTol, &err);
            err_sum += err;
        }
        total += gk::integrate([&](double y) { return f(y) * f_y(y); }, split, pr.tau, 15,
                               kTol, &err);
        err_sum += err;
        if (!(err_sum < 1e-6 * std::max(1.0, std::abs(total))))
            throw QuadratureError("residual-time integral did not converge");
        return total;
    };

    // Length/cost of the remainder of the cycle once the state change has
    // happened, as a function of the realized residual time. An unsuccessful
    // SO contributes its full y and hands over to the next stage, so the SO
    // term uses p_so rather than the success-only el_so.
    const auto len_all = [&](double y) {
        const CycleConditionals c = cycle_conditionals(pr, t_tilde, y);
        return c.el_uso + c.el_cm + y * c.p_so;
    };
    const auto cost_all = [&](double y) {
        const CycleConditionals c = cycle_conditionals(pr, t_tilde, y);
        return c.ec_uso + c.ec_cm + c.ec_so;
    };
    const auto len_success = [&](double y) {
        const CycleConditionals c = cycle_conditionals(pr, t_tilde, y);
        return c.el_uso + c.el_cm + c.el_so;
    };

    const double p_so_mean = integ([&](double y) {
        return cycle_conditionals(pr, t_tilde, y).p_so;
    });
    const double p_u = q * std::exp(-pr.mu1 * pr.tau - pr.lambda * pr.p * (pr.tau - t_tilde));

    // Unsuccessful SOs restart a full-length stage: geometric number of
    // stages, each identical to the y = tau problem.
    const double stage_len = len_all(pr.tau) / (1.0 - p_u);
    const double stage_cost = cost_all(pr.tau) / (1.0 - p_u);

    DeferralResult res{};
    res.p_u = p_u;
    res.len_first = integ(len_success);
    res.cost_first = integ(cost_all);
    const double total_len = integ(len_all) + q * p_so_mean * stage_len;
    const double total_cost = res.cost_first + q * p_so_mean * stage_cost;
    res.len_rest = total_len - res.len_first;
    res.cost_rest = total_cost - res.cost_first;
    res.cycle_length = 1.0 / pr.mu2 + total_len;
    res.cycle_cost = total_cost;
    res.rate = res.cycle_cost / res.cycle_length;
    return res;
}

DeferralOptimum optimize_deferral_threshold(const ModelParams& pr, double grid_step) {
    if (!(grid_step > 0.0)) throw DomainError("grid_step", "grid_step must be positive");
    DeferralOptimum best{0.0, cost_rate_deferral(pr, 0.0).rate};
    for (double t = grid_step; t < pr.tau + 0.5 * grid_step; t += grid_step) {
        const double tt = std::min(t, pr.tau);
        const double rate = cost_rate_deferral(pr, tt).rate;
        if (rate < best.rate) best = {tt, rate};
    }
    return best;
}

}  // namespace cbm
