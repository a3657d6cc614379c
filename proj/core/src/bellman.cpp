#include "cbm/bellman.hpp"

#include <cmath>

namespace cbm {

namespace {

struct Consts {
    double m, b, s;
    double big_m;     // mu1*c_cm/m : value of keeping the asset until failure
    double a_level;   // (mu1*c_cm + lambda*c_uso)/(m+b)
    double uso_bar;   // c_pm_uso / p
    double so_bar;    // c_pm_so / p
};

Consts consts(const ModelParams& pr) {
    const double m = pr.mu1 + pr.mu2;
    const double b = pr.lambda * pr.p;
    return {m,
            b,
            m + b,
            pr.mu1 * pr.c_cm / m,
            (pr.mu1 * pr.c_cm + pr.lambda * pr.c_pm_uso) / (m + b),
            pr.c_pm_uso / pr.p,
            pr.c_pm_so / pr.p};
}

// Boundary value at tau implied by the wrap-around condition
// F(0) = c_pm_so + (1-p)*F(tau) when a single exponential piece with the
// given rate and level spans [0, tau].
double wrap_boundary(const ModelParams& pr, double level, double rate) {
    const double e = std::exp(rate * pr.tau);
    return (pr.c_pm_so + level * (e - 1.0)) / (e - 1.0 + pr.p);
}

// Residual of the gluing condition at the crossing time. Zero when the
// two-piece construction is continuous with value c_pm_uso/p at t.
double glue_residual(const ModelParams& pr, const Consts& c, double t) {
    const double d =
        (c.big_m + (c.uso_bar - c.big_m) * std::exp(c.m * t) - pr.c_pm_so) / (1.0 - pr.p);
    return c.a_level + (d - c.a_level) * std::exp(c.s * (pr.tau - t)) - c.uso_bar;
}

std::optional<double> solve_glue(const ModelParams& pr, const Consts& c) {
    constexpr int kScan = 4000;
    const double lo = -pr.tau, hi = 2.0 * pr.tau;
    double prev_t = lo, prev_v = glue_residual(pr, c, lo);
    for (int i = 1; i <= kScan; ++i) {
        const double t = lo + (hi - lo) * i / kScan;
        const double v = glue_residual(pr, c, t);
        if (prev_v == 0.0) return prev_t;
        if (prev_v * v < 0.0) {
            double a = prev_t, b2 = t, fa = prev_v;
            while (b2 - a > 1e-13 * std::max(1.0, pr.tau)) {
                const double mid = 0.5 * (a + b2);
                const double fm = glue_residual(pr, c, mid);
                if (fm == 0.0) return mid;
                (fa * fm < 0.0 ? b2 : a) = mid;
                if (!(fa * fm < 0.0)) fa = fm;
            }
            return 0.5 * (a + b2);
        }
        prev_t = t;
        prev_v = v;
    }
    return std::nullopt;
}

}  // namespace

double ValueDifference::eval(double t) const {
    for (const auto& piece : pieces) {
        if (t >= piece.lo && t <= piece.hi)
            return piece.level + piece.coef * std::exp(piece.rate * (pieces.back().hi - t));
    }
    throw DomainError("t", "evaluation point outside [0, tau]");
}

ValueDifference value_difference(const ModelParams& pr) {
    if (!(pr.c_pm_so < pr.c_pm_uso))
        throw DomainError("c_pm_so", "value_difference requires c_pm_so < c_pm_uso");
    const Consts c = consts(pr);
    ValueDifference vd;
    vd.g_bound = cm_only_rate_bound(pr);

    // Case I: doing nothing is optimal everywhere; the difference is flat.
    if (c.big_m <= c.so_bar) {
        vd.regime = CaseLabel::I;
        vd.boundary_value = c.big_m;
        vd.pieces = {{0.0, pr.tau, c.big_m, 0.0, 0.0}};
        return vd;
    }

    // Case II: SO repair only; one m-rate piece closed by the wrap-around.
    const double d2 = wrap_boundary(pr, c.big_m, c.m);
    if (d2 <= c.uso_bar) {
        vd.regime = CaseLabel::II;
        vd.boundary_value = d2;
        vd.pieces = {{0.0, pr.tau, c.big_m, d2 - c.big_m, c.m}};
        if (!(d2 > c.so_bar))
            throw RegimeMismatch("case II boundary value at or below c_pm_so/p");
        return vd;
    }

    // Cases III/IV: the difference crosses c_pm_uso/p at t*.
    const std::optional<double> t_star = solve_glue(pr, c);
    if (!t_star) throw RegimeMismatch("no crossing time found on [-tau, 2*tau]");
    vd.t_star = *t_star;

    if (*t_star > 0.0 && *t_star < pr.tau) {
        vd.regime = CaseLabel::III;
        const double d =
            (c.big_m + (c.uso_bar - c.big_m) * std::exp(c.m * *t_star) - pr.c_pm_so) /
            (1.0 - pr.p);
        vd.boundary_value = d;
        // Lower piece expressed against the common tau anchor:
        // M + (c_uso/p - M) e^{m (t* - t)} = M + coef * e^{m (tau - t)}.
        const double lower_coef = (c.uso_bar - c.big_m) * std::exp(-c.m * (pr.tau - *t_star));
        vd.pieces = {{0.0, *t_star, c.big_m, lower_coef, c.m},
                     {*t_star, pr.tau, c.a_level, d - c.a_level, c.s}};
        if (!(d < c.a_level))
            throw RegimeMismatch("case III boundary value not below the USO-always level");
        return vd;
    }

    vd.regime = CaseLabel::IV;
    if (*t_star <= 0.0) {
        // USO repair is worthwhile throughout the period.
        const double d = wrap_boundary(pr, c.a_level, c.s);
        vd.boundary_value = d;
        vd.pieces = {{0.0, pr.tau, c.a_level, d - c.a_level, c.s}};
    } else {
        // Crossing beyond tau: the period never reaches the USO-repair region.
        vd.boundary_value = d2;
        vd.pieces = {{0.0, pr.tau, c.big_m, d2 - c.big_m, c.m}};
    }
    return vd;
}

RegimeReport check_regime_conditions(const ModelParams& pr,
                                     const OptimalPolicyResult& result) {
    const Consts c = consts(pr);
    const ValueDifference vd = value_difference(pr);

    CaseLabel claimed;
    switch (result.regime) {
        case Regime::NeverPM: claimed = CaseLabel::I; break;
        case Regime::SOOnly:
            // SO-only arises either from the case II inequality or from a
            // crossing time beyond tau (case IV construction).
            claimed = (vd.regime == CaseLabel::IV && vd.t_star && *vd.t_star >= pr.tau)
                          ? CaseLabel::IV
                          : CaseLabel::II;
            break;
        case Regime::SOAndUSOThreshold:
            claimed = (result.t_hat && *result.t_hat >= pr.tau) ? CaseLabel::IV
                                                                : CaseLabel::III;
            break;
        case Regime::SOAndUSOAlways: claimed = CaseLabel::IV; break;
        default:
            throw DomainError("regime", "regime outside the c_pm_so < c_pm_uso ordering");
    }

    RegimeReport report;
    report.case_label = vd.regime;
    auto add = [&](std::string name, double residual) {
        report.checks.push_back({std::move(name), residual >= 0.0, residual});
    };

    switch (claimed) {
        case CaseLabel::I:
            add("constant value at or below c_pm_so/p", c.so_bar - c.big_m);
            break;
        case CaseLabel::II:
            add("boundary above c_pm_so/p", vd.boundary_value - c.so_bar);
            add("boundary at or below c_pm_uso/p", c.uso_bar - vd.boundary_value);
            break;
        case CaseLabel::III: {
            add("boundary above c_pm_uso/p", vd.boundary_value - c.uso_bar);
            add("boundary below USO-always level", c.a_level - vd.boundary_value);
            if (vd.t_star) {
                const double cross = std::abs(vd.eval(*vd.t_star) - c.uso_bar);
                add("crossing value (1e-9 scale tolerance)",
                    1e-9 * std::max(1.0, c.uso_bar) - cross);
                const double wrap = std::abs(
                    vd.eval(0.0) - (pr.c_pm_so + (1.0 - pr.p) * vd.boundary_value));
                add("wrap-around at 0 (1e-9 scale tolerance)",
                    1e-9 * std::max(1.0, c.uso_bar) - wrap);
            } else {
                add("crossing time present", -1.0);
            }
            break;
        }
        case CaseLabel::IV:
            add("boundary at or above c_pm_uso/p", vd.boundary_value - c.uso_bar);
            break;
    }
    add("case label agreement", claimed == vd.regime ? 0.0 : -1.0);

    report.pass = true;
    for (const auto& chk : report.checks) report.pass = report.pass && chk.pass;
    return report;
}

}  // namespace cbm
