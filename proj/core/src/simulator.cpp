#include "cbm/simulator.hpp"

#include <cmath>
#include <future>

namespace cbm {

namespace {

// Small counter-seeded generator so replication i's stream is a pure function
// of (seed, i); standard-library distributions are avoided because their
// output is implementation-defined and would break byte-identical runs.
struct Rng {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // The counter sequences all live on one additive orbit, so the starting
    // state is avalanched: without this, nearby (seed, stream) pairs would
    // land a few steps apart and produce near-duplicate replications.
    explicit Rng(std::uint64_t seed, std::uint64_t stream) {
        state = mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^
                    mix(stream + 0xd1b54a32d192ed03ULL));
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        return mix(z);
    }

    double uniform() {  // (0, 1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }
};

struct RepResult {
    double cost_rate;
    EventRates counts;
};

struct CycleAccum {
    double sum_len = 0.0, sum_len2 = 0.0;
    double sum_cost = 0.0, sum_cost2 = 0.0;
    std::uint64_t n = 0;
    std::vector<double> y_samples;
};

constexpr double kInf = 1e300;

template <typename OnRenewal, typename OnStateChange>
RepResult run_replication(const ModelParams& pr, const Policy& policy, double horizon,
                          Rng rng, OnRenewal&& on_renewal, OnStateChange&& on_state_change) {
    const bool so_repairs =
        policy.kind == PolicyKind::OnlySO || policy.kind == PolicyKind::ControlLimit;
    const bool uso_repairs =
        policy.kind == PolicyKind::OnlyUSO || policy.kind == PolicyKind::ControlLimit;
    const double t_tilde = policy.kind == PolicyKind::ControlLimit ? policy.t_tilde : 0.0;

    double t = 0.0;
    int state = 2;
    double cost = 0.0;
    EventRates counts;
    double next_so = pr.tau;
    double t_sc = rng.exponential(pr.mu2);
    double t_uso = pr.lambda > 0.0 ? rng.exponential(pr.lambda) : kInf;

    while (true) {
        // Tie order: state change / failure first, then SO, then USO.
        double t_next;
        enum { kStateChange, kSo, kUso } ev;
        if (t_sc <= next_so && t_sc <= t_uso) {
            t_next = t_sc;
            ev = kStateChange;
        } else if (next_so <= t_uso) {
            t_next = next_so;
            ev = kSo;
        } else {
            t_next = t_uso;
            ev = kUso;
        }
        if (t_next >= horizon) break;
        t = t_next;

        switch (ev) {
            case kStateChange:
                if (state == 2) {
                    state = 1;
                    t_sc = t + rng.exponential(pr.mu1);
                    on_state_change(t, next_so);
                } else {
                    cost += pr.c_cm;
                    counts.cm += 1.0;
                    state = 2;
                    t_sc = t + rng.exponential(pr.mu2);
                    if (policy.defer) next_so = t + pr.tau;
                    on_renewal(t, cost);
                }
                break;
            case kSo:
                if (state == 1 && so_repairs) {
                    cost += pr.c_pm_so;
                    if (rng.uniform() < pr.p) {
                        counts.so_success += 1.0;
                        state = 2;
                        t_sc = t + rng.exponential(pr.mu2);
                        if (policy.defer) {
                            next_so = t + pr.tau;
                            on_renewal(t, cost);
                            break;
                        }
                        on_renewal(t, cost);
                    } else {
                        counts.so_fail += 1.0;
                    }
                }
                next_so += pr.tau;
                break;
            case kUso:
                t_uso = t + rng.exponential(pr.lambda);
                if (state == 1 && uso_repairs) {
                    const bool in_window = policy.kind == PolicyKind::OnlyUSO ||
                                           (next_so - t) > t_tilde;
                    if (in_window) {
                        cost += pr.c_pm_uso;
                        if (rng.uniform() < pr.p) {
                            counts.uso_success += 1.0;
                            state = 2;
                            t_sc = t + rng.exponential(pr.mu2);
                            if (policy.defer) next_so = t + pr.tau;
                            on_renewal(t, cost);
                        } else {
                            counts.uso_fail += 1.0;
                        }
                    }
                }
                break;
        }
    }
    counts.cm /= horizon;
    counts.so_success /= horizon;
    counts.so_fail /= horizon;
    counts.uso_success /= horizon;
    counts.uso_fail /= horizon;
    return {cost / horizon, counts};
}

void check_config(const SimConfig& cfg) {
    if (!(cfg.horizon > 0)) throw DomainError("horizon", "horizon must be positive");
    if (cfg.replications < 1) throw DomainError("replications", "need at least one replication");
}

}  // namespace

SimEstimate simulate(const ModelParams& pr, const Policy& policy, const SimConfig& cfg) {
    check_config(cfg);
    check_policy(pr, policy);

    std::vector<std::future<RepResult>> futures;
    futures.reserve(cfg.replications);
    for (int i = 0; i < cfg.replications; ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
            return run_replication(
                pr, policy, cfg.horizon, Rng(cfg.seed, static_cast<std::uint64_t>(i)),
                [](double, double) {}, [](double, double) {});
        }));
    }
    std::vector<RepResult> reps;
    reps.reserve(cfg.replications);
    for (auto& f : futures) reps.push_back(f.get());

    SimEstimate est{};
    double mean = 0.0;
    for (const auto& r : reps) {
        mean += r.cost_rate;
        est.counts.cm += r.counts.cm;
        est.counts.so_success += r.counts.so_success;
        est.counts.so_fail += r.counts.so_fail;
        est.counts.uso_success += r.counts.uso_success;
        est.counts.uso_fail += r.counts.uso_fail;
    }
    const double n = static_cast<double>(reps.size());
    mean /= n;
    est.counts.cm /= n;
    est.counts.so_success /= n;
    est.counts.so_fail /= n;
    est.counts.uso_success /= n;
    est.counts.uso_fail /= n;
    double var = 0.0;
    for (const auto& r : reps) var += (r.cost_rate - mean) * (r.cost_rate - mean);
    var = reps.size() > 1 ? var / (n - 1.0) : 0.0;
    est.rate = mean;
    est.std_err = std::sqrt(var / n);
    est.ci95 = 1.96 * est.std_err;
    return est;
}

CycleStats simulate_cycle_stats(const ModelParams& pr, double t_tilde, const SimConfig& cfg) {
    check_config(cfg);
    const Policy policy = policy_control_limit(t_tilde, /*defer=*/true);
    check_policy(pr, policy);

    std::vector<std::future<CycleAccum>> futures;
    for (int i = 0; i < cfg.replications; ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
            CycleAccum acc;
            double cycle_start_t = 0.0, cycle_start_cost = 0.0;
            run_replication(
                pr, policy, cfg.horizon, Rng(cfg.seed, static_cast<std::uint64_t>(i)),
                [&](double t, double cost) {
                    const double len = t - cycle_start_t;
                    const double c = cost - cycle_start_cost;
                    acc.sum_len += len;
                    acc.sum_len2 += len * len;
                    acc.sum_cost += c;
                    acc.sum_cost2 += c * c;
                    acc.n += 1;
                    cycle_start_t = t;
                    cycle_start_cost = cost;
                },
                [&](double t, double next_so) {
                    if (acc.y_samples.size() < 200000) acc.y_samples.push_back(next_so - t);
                });
            return acc;
        }));
    }

    CycleStats out;
    double sum_len = 0.0, sum_len2 = 0.0, sum_cost = 0.0, sum_cost2 = 0.0;
    for (auto& f : futures) {
        CycleAccum acc = f.get();
        sum_len += acc.sum_len;
        sum_len2 += acc.sum_len2;
        sum_cost += acc.sum_cost;
        sum_cost2 += acc.sum_cost2;
        out.cycles += acc.n;
        out.y_samples.insert(out.y_samples.end(), acc.y_samples.begin(), acc.y_samples.end());
    }
    if (out.cycles == 0) throw NumericError("no regeneration cycles observed");
    const double n = static_cast<double>(out.cycles);
    out.mean_length = sum_len / n;
    out.mean_cost = sum_cost / n;
    const double var_len = std::max(0.0, sum_len2 / n - out.mean_length * out.mean_length);
    const double var_cost = std::max(0.0, sum_cost2 / n - out.mean_cost * out.mean_cost);
    out.se_length = std::sqrt(var_len / n);
    out.se_cost = std::sqrt(var_cost / n);
    return out;
}

}  // namespace cbm
