#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "cbm/deferral.hpp"
#include "test_util.hpp"

using namespace cbm;

namespace {

struct McStat {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    void add(double x) { sum += x; sum2 += x * x; ++n; }
    double mean() const { return sum / n; }
    double se() const {
        const double m = mean();
        return std::sqrt(std::max(0.0, sum2 / n - m * m) / n);
    }
};

// Direct simulation of one first interval: state change at time 0, residual
// time y to the SO, USO repairs attempted while the remaining time exceeds
// t_tilde (i.e. before w = y - t_tilde), failure rate mu1.
struct McConditionals {
    McStat p_so, p_uso, p_cm, el_uso, el_so, el_cm, ec_uso, ec_so, ec_cm;
};

McConditionals mc_conditionals(const ModelParams& pr, double t_tilde, double y,
                               std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::exponential_distribution<double> fail(pr.mu1), arrive(pr.lambda);
    std::bernoulli_distribution success(pr.p);
    const double w = std::max(y - t_tilde, 0.0);
    McConditionals out;
    for (std::size_t i = 0; i < n; ++i) {
        const double t_fail = fail(gen);
        double t = arrive(gen);
        int failed_attempts = 0;
        double end = y;        // default: reach the SO
        int outcome = 0;       // 0 = SO, 1 = USO, 2 = CM
        while (t < w && t < t_fail) {
            if (success(gen)) {
                end = t;
                outcome = 1;
                break;
            }
            ++failed_attempts;
            t += arrive(gen);
        }
        if (outcome == 0 && t_fail < y) {
            end = t_fail;
            outcome = 2;
        }
        const double failed_cost = pr.c_pm_uso * failed_attempts;
        out.p_so.add(outcome == 0 ? 1.0 : 0.0);
        out.p_uso.add(outcome == 1 ? 1.0 : 0.0);
        out.p_cm.add(outcome == 2 ? 1.0 : 0.0);
        out.el_uso.add(outcome == 1 ? end : 0.0);
        out.el_cm.add(outcome == 2 ? end : 0.0);
        out.el_so.add(outcome == 0 && success(gen) ? y : 0.0);
        out.ec_uso.add(outcome == 1 ? pr.c_pm_uso + failed_cost : 0.0);
        out.ec_so.add(outcome == 0 ? pr.c_pm_so + failed_cost : 0.0);
        out.ec_cm.add(outcome == 2 ? pr.c_cm + failed_cost : 0.0);
    }
    return out;
}

void check_mc(double formula, const McStat& stat) {
    CHECK(std::abs(formula - stat.mean()) <= 4.0 * stat.se() + 1e-12);
}

}  // namespace

TEST_SUITE("deferral") {

TEST_CASE("outcome probabilities partition and lengths are coherent") {
    const ModelParams pr = test_util::wind();
    for (double tt : {0.0, 0.3, 0.7, 1.0}) {
        for (int k = 0; k <= 100; ++k) {
            const double y = pr.tau * k / 100.0;
            const CycleConditionals c = cycle_conditionals(pr, tt, y);
            CHECK(c.p_so >= 0.0);
            CHECK(c.p_uso >= 0.0);
            CHECK(c.p_cm >= -1e-12);
            CHECK(std::abs(c.p_so + c.p_uso + c.p_cm - 1.0) <= 1e-12);
            CHECK(c.el_uso >= 0.0);
            CHECK(c.el_cm >= -1e-12);
            // no ending time can exceed the residual time
            CHECK(c.el_uso + c.el_cm <= y * (c.p_uso + c.p_cm) + 1e-10);
            CHECK(c.el_so == doctest::Approx(y * pr.p * c.p_so).epsilon(1e-12));
        }
    }
}

TEST_CASE("below the threshold no USO repairs are attempted") {
    const ModelParams pr = test_util::wind();
    const CycleConditionals c = cycle_conditionals(pr, 0.6, 0.4);
    CHECK(c.p_uso == 0.0);
    CHECK(c.el_uso == 0.0);
    CHECK(c.ec_uso == 0.0);
    CHECK(c.p_so == doctest::Approx(std::exp(-pr.mu1 * 0.4)).epsilon(1e-12));
    CHECK(c.ec_so == doctest::Approx(pr.c_pm_so * c.p_so).epsilon(1e-12));
}

TEST_CASE("zero residual time ends at the SO immediately") {
    const ModelParams pr = test_util::wind();
    const CycleConditionals c = cycle_conditionals(pr, 0.3, 0.0);
    CHECK(c.p_so == 1.0);
    CHECK(c.p_cm == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.el_cm == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.ec_so == doctest::Approx(pr.c_pm_so).epsilon(1e-12));
}

TEST_CASE("conditionals match direct Monte Carlo") {
    const ModelParams pr = test_util::wind();
    const double tt = 0.3, y = 0.8;
    const CycleConditionals c = cycle_conditionals(pr, tt, y);
    const McConditionals mc = mc_conditionals(pr, tt, y, 400000, 20240817);
    check_mc(c.p_so, mc.p_so);
    check_mc(c.p_uso, mc.p_uso);
    check_mc(c.p_cm, mc.p_cm);
    check_mc(c.el_uso, mc.el_uso);
    check_mc(c.el_so, mc.el_so);
    check_mc(c.el_cm, mc.el_cm);
    check_mc(c.ec_uso, mc.ec_uso);
    check_mc(c.ec_so, mc.ec_so);
    check_mc(c.ec_cm, mc.ec_cm);
}

TEST_CASE("conditionals match Monte Carlo on a second parameter set") {
    const ModelParams pr = test_util::artificial();
    const double tt = 1.0, y = 3.0;
    const CycleConditionals c = cycle_conditionals(pr, tt, y);
    const McConditionals mc = mc_conditionals(pr, tt, y, 400000, 7);
    check_mc(c.p_so, mc.p_so);
    check_mc(c.p_uso, mc.p_uso);
    check_mc(c.p_cm, mc.p_cm);
    check_mc(c.el_uso, mc.el_uso);
    check_mc(c.el_cm, mc.el_cm);
    check_mc(c.ec_uso, mc.ec_uso);
    check_mc(c.ec_so, mc.ec_so);
    check_mc(c.ec_cm, mc.ec_cm);
}

TEST_CASE("renewal assembly agrees with a brute-force integration oracle") {
    for (const ModelParams& pr :
         {test_util::wind(), test_util::lith(), test_util::artificial()}) {
        for (double frac : {0.0, 0.35, 1.0}) {
            const double tt = frac * pr.tau;
            const DeferralResult res = cost_rate_deferral(pr, tt);

            const double q = 1.0 - pr.p;
            const double z = 1.0 - std::exp(-pr.mu2 * pr.tau);
            const int n = 20000;
            double len = 0.0, cost = 0.0, pso = 0.0;
            for (int i = 0; i < n; ++i) {
                const double y = pr.tau * (i + 0.5) / n;
                const double fy =
                    pr.mu2 * std::exp(-pr.mu2 * (pr.tau - y)) / z * (pr.tau / n);
                const CycleConditionals c = cycle_conditionals(pr, tt, y);
                len += (c.el_uso + c.el_cm + y * c.p_so) * fy;
                cost += (c.ec_uso + c.ec_cm + c.ec_so) * fy;
                pso += c.p_so * fy;
            }
            const CycleConditionals full = cycle_conditionals(pr, tt, pr.tau);
            const double p_u =
                q * std::exp(-pr.mu1 * pr.tau - pr.lambda * pr.p * (pr.tau - tt));
            const double stage_len =
                (full.el_uso + full.el_cm + pr.tau * full.p_so) / (1.0 - p_u);
            const double stage_cost =
                (full.ec_uso + full.ec_cm + full.ec_so) / (1.0 - p_u);
            const double oracle_len = 1.0 / pr.mu2 + len + q * pso * stage_len;
            const double oracle_cost = cost + q * pso * stage_cost;

            CHECK(res.p_u == doctest::Approx(p_u).epsilon(1e-12));
            CHECK(res.cycle_length == doctest::Approx(oracle_len).epsilon(1e-6));
            CHECK(res.cycle_cost == doctest::Approx(oracle_cost).epsilon(1e-6));
            CHECK(res.rate == doctest::Approx(res.cycle_cost / res.cycle_length)
                                  .epsilon(1e-12));
        }
    }
}

TEST_CASE("deferral rates at reference parameter sets") {
    CHECK(cost_rate_deferral(test_util::wind(), 0.0).rate ==
          doctest::Approx(8569.88).epsilon(1e-4));
    CHECK(cost_rate_deferral(test_util::lith(), 1.0).rate ==
          doctest::Approx(12831.85).epsilon(1e-4));
    CHECK(cost_rate_deferral(test_util::artificial(), 4.0).rate ==
          doctest::Approx(5347.82).epsilon(1e-4));
}

TEST_CASE("threshold optimization over the grid") {
    const DeferralOptimum wind_opt = optimize_deferral_threshold(test_util::wind(), 0.02);
    CHECK(wind_opt.t_tilde == 0.0);
    CHECK(wind_opt.rate == doctest::Approx(8569.88).epsilon(1e-4));

    const DeferralOptimum lith_opt = optimize_deferral_threshold(test_util::lith(), 0.02);
    CHECK(lith_opt.t_tilde == doctest::Approx(1.0).epsilon(1e-12));

    const DeferralOptimum art_opt =
        optimize_deferral_threshold(test_util::artificial(), 0.1);
    CHECK(art_opt.t_tilde == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(art_opt.rate == doctest::Approx(5347.82).epsilon(1e-4));
}

TEST_CASE("input validation") {
    const ModelParams pr = test_util::wind();
    CHECK_THROWS_AS(cycle_conditionals(pr, -0.1, 0.5), DomainError);
    CHECK_THROWS_AS(cycle_conditionals(pr, 0.3, 1.5), DomainError);
    CHECK_THROWS_AS(cost_rate_deferral(pr, pr.tau + 0.1), DomainError);
    CHECK_THROWS_AS(optimize_deferral_threshold(pr, 0.0), DomainError);
}

}  // TEST_SUITE
