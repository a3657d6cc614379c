#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cbm/closed_form.hpp"
#include "cbm/deferral.hpp"
#include "cbm/simulator.hpp"
#include "test_util.hpp"

using namespace cbm;

namespace {

SimConfig quick(double horizon = 3e4, int reps = 16, std::uint64_t seed = 5) {
    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.replications = reps;
    cfg.seed = seed;
    return cfg;
}

void check_within(double formula, const SimEstimate& est, double k = 3.0) {
    CHECK(std::abs(formula - est.rate) <= k * est.std_err + 1e-9);
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("identical configurations give bit-identical estimates") {
    const ModelParams pr = test_util::wind();
    const Policy pol = policy_control_limit(0.3);
    const SimConfig cfg = quick(5e3, 8, 42);
    const SimEstimate a = simulate(pr, pol, cfg);
    const SimEstimate b = simulate(pr, pol, cfg);
    CHECK(a.rate == b.rate);
    CHECK(a.std_err == b.std_err);
    CHECK(a.counts.cm == b.counts.cm);
    CHECK(a.counts.uso_success == b.counts.uso_success);

    SimConfig other = cfg;
    other.seed = 43;
    CHECK(simulate(pr, pol, other).rate != a.rate);
}

TEST_CASE("corrective-only rate and failure frequency") {
    const ModelParams pr = test_util::wind();
    const SimEstimate est = simulate(pr, policy_never(), quick());
    check_within(46500.0, est);
    // long-run failure frequency mu1*mu2/m
    const double freq = pr.mu1 * pr.mu2 / (pr.mu1 + pr.mu2);
    CHECK(est.counts.cm == doctest::Approx(freq).epsilon(0.02));
    CHECK(est.counts.so_success == 0.0);
    CHECK(est.counts.uso_success == 0.0);
}

TEST_CASE("standard error shrinks like the square root of replications") {
    const ModelParams pr = test_util::wind();
    const Policy pol = policy_control_limit(0.0);
    const double se_small = simulate(pr, pol, quick(5e3, 12, 9)).std_err;
    const double se_large = simulate(pr, pol, quick(5e3, 48, 9)).std_err;
    const double ratio = se_small / se_large;
    CHECK(ratio > 2.0 * 0.65);
    CHECK(ratio < 2.0 * 1.45);
}

TEST_CASE("closed forms match the simulator across policy families") {
    const ModelParams pr = test_util::wind();
    check_within(cost_rate_only_so(pr).total, simulate(pr, policy_only_so(), quick()));
    check_within(cost_rate_only_uso(pr).total, simulate(pr, policy_only_uso(), quick()));
    check_within(cost_rate_control_limit(pr, 0.3).total,
                 simulate(pr, policy_control_limit(0.3), quick()));
    check_within(cost_rate_control_limit(pr, 0.0).total,
                 simulate(pr, policy_control_limit(0.0), quick()));

    const ModelParams art = test_util::artificial();
    check_within(cost_rate_control_limit(art, 1.0).total,
                 simulate(art, policy_control_limit(1.0), quick()));
}

TEST_CASE("deferral rates match the simulator") {
    const ModelParams pr = test_util::wind();
    check_within(cost_rate_deferral(pr, 0.3).rate,
                 simulate(pr, policy_control_limit(0.3, true), quick()));

    const ModelParams art = test_util::artificial();
    check_within(cost_rate_deferral(art, 1.0).rate,
                 simulate(art, policy_control_limit(1.0, true), quick()));
}

TEST_CASE("regeneration-cycle statistics match the renewal quantities") {
    const ModelParams pr = test_util::wind();
    const DeferralResult ref = cost_rate_deferral(pr, 0.3);
    const CycleStats stats = simulate_cycle_stats(pr, 0.3, quick(2e4, 16, 11));
    CHECK(stats.cycles > 1000);
    CHECK(std::abs(stats.mean_length - ref.cycle_length) <= 4.0 * stats.se_length);
    CHECK(std::abs(stats.mean_cost - ref.cycle_cost) <= 4.0 * stats.se_cost);
}

TEST_CASE("residual time to the next SO follows the truncated exponential") {
    const ModelParams pr = test_util::wind();
    CycleStats stats = simulate_cycle_stats(pr, 0.3, quick(2e4, 8, 23));
    auto& ys = stats.y_samples;
    REQUIRE(ys.size() > 5000);
    std::sort(ys.begin(), ys.end());
    const double z = 1.0 - std::exp(-pr.mu2 * pr.tau);
    double d_n = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double cdf =
            (std::exp(-pr.mu2 * (pr.tau - ys[i])) - std::exp(-pr.mu2 * pr.tau)) / z;
        const double hi = static_cast<double>(i + 1) / ys.size();
        const double lo = static_cast<double>(i) / ys.size();
        d_n = std::max({d_n, std::abs(cdf - hi), std::abs(cdf - lo)});
    }
    // 1% Kolmogorov-Smirnov critical value
    CHECK(d_n < 1.63 / std::sqrt(static_cast<double>(ys.size())));
}

TEST_CASE("random parameter draws agree between formula and simulation") {
    test_util::DrawRng rng(97);
    for (int i = 0; i < 3; ++i) {
        const ModelParams pr = test_util::random_params(rng);
        const double tt = pr.tau * rng.uniform(0.0, 1.0);
        check_within(cost_rate_control_limit(pr, tt).total,
                     simulate(pr, policy_control_limit(tt), quick(2e4, 12, 100 + i)), 3.5);
        check_within(cost_rate_deferral(pr, tt).rate,
                     simulate(pr, policy_control_limit(tt, true), quick(2e4, 12, 200 + i)),
                     3.5);
    }
}

}  // TEST_SUITE
