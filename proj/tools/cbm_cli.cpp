// Command-line front end: evaluates, optimizes, simulates and verifies
// maintenance policies for the three-state opportunistic-maintenance model.
// Scenarios are flat JSON parameter files; results go to stdout (or --out)
// as JSON or CSV. Exit codes: 0 ok, 1 verification failure, 2 input error,
// 3 numeric failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbm/bellman.hpp"
#include "cbm/closed_form.hpp"
#include "cbm/deferral.hpp"
#include "cbm/model.hpp"
#include "cbm/optimal_policy.hpp"
#include "cbm/simulator.hpp"

using nlohmann::json;

namespace {

struct Scenario {
    cbm::ModelParams params;
    std::optional<cbm::Policy> policy;
};

cbm::PolicyKind parse_kind(const std::string& kind) {
    if (kind == "never") return cbm::PolicyKind::NeverPM;
    if (kind == "so") return cbm::PolicyKind::OnlySO;
    if (kind == "uso") return cbm::PolicyKind::OnlyUSO;
    if (kind == "limit") return cbm::PolicyKind::ControlLimit;
    throw cbm::DomainError("policy", "unknown policy kind: " + kind);
}

const char* kind_name(cbm::PolicyKind kind) {
    switch (kind) {
        case cbm::PolicyKind::NeverPM: return "never";
        case cbm::PolicyKind::OnlySO: return "so";
        case cbm::PolicyKind::OnlyUSO: return "uso";
        case cbm::PolicyKind::ControlLimit: return "limit";
    }
    return "?";
}

const char* regime_name(cbm::Regime regime) {
    switch (regime) {
        case cbm::Regime::NeverPM: return "NeverPM";
        case cbm::Regime::SOOnly: return "SOOnly";
        case cbm::Regime::SOAndUSOThreshold: return "SOAndUSOThreshold";
        case cbm::Regime::SOAndUSOAlways: return "SOAndUSOAlways";
        case cbm::Regime::USOOnly: return "USOOnly";
        case cbm::Regime::Both: return "Both";
    }
    return "?";
}

double require_number(const json& obj, const std::string& key) {
    if (!obj.contains(key))
        throw cbm::DomainError(key, "scenario is missing required key '" + key + "'");
    if (!obj.at(key).is_number())
        throw cbm::DomainError(key, "scenario key '" + key + "' must be numeric");
    return obj.at(key).get<double>();
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cbm::DomainError("scenario", "cannot open scenario file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw cbm::DomainError("scenario", std::string("malformed JSON: ") + e.what());
    }
    static const std::vector<std::string> param_keys = {
        "mu1", "mu2", "lambda", "p", "tau", "c_cm", "c_pm_so", "c_pm_uso"};
    for (const auto& [key, value] : root.items()) {
        if (key == "policy" || key == "sweep") continue;
        if (std::find(param_keys.begin(), param_keys.end(), key) == param_keys.end())
            throw cbm::DomainError(key, "unknown scenario key '" + key + "'");
    }
    Scenario sc;
    sc.params = cbm::validate({require_number(root, "mu2"), require_number(root, "mu1"),
                               require_number(root, "lambda"), require_number(root, "p"),
                               require_number(root, "tau"), require_number(root, "c_cm"),
                               require_number(root, "c_pm_so"),
                               require_number(root, "c_pm_uso")});
    if (root.contains("policy")) {
        const json& pj = root.at("policy");
        cbm::Policy policy;
        policy.kind = parse_kind(pj.value("kind", std::string("limit")));
        policy.t_tilde = pj.value("t_tilde", 0.0);
        policy.defer = pj.value("defer", false);
        cbm::check_policy(sc.params, policy);
        sc.policy = policy;
    }
    return sc;
}

struct Output {
    std::string path;    // empty = stdout
    std::string format;  // "json" or "csv"

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw cbm::DomainError("out", "cannot open output file: " + path);
        out << text;
    }
};

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

json breakdown_json(const cbm::CostBreakdown& cb) {
    return {{"so_pm", cb.so_pm}, {"uso_pm", cb.uso_pm}, {"cm", cb.cm}, {"total", cb.total}};
}

std::string render_rows(const Output& out, const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
    if (out.format == "json") {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
            arr.push_back(obj);
        }
        return arr.dump(2) + "\n";
    }
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
        os << "\n";
    }
    return os.str();
}

// Policy choice of the perfect-repair optimum, evaluated at the true p.
cbm::CostBreakdown perfect_threshold_cost_at_true_p(const cbm::ModelParams& pr) {
    cbm::ModelParams perfect = pr;
    perfect.p = 1.0;
    const cbm::OptimalPolicyResult res = cbm::classify_optimal(perfect);
    switch (res.regime) {
        case cbm::Regime::NeverPM: return cbm::cost_rate_only_cm(pr);
        case cbm::Regime::SOOnly: return cbm::cost_rate_only_so(pr);
        case cbm::Regime::USOOnly: return cbm::cost_rate_only_uso(pr);
        default: return cbm::cost_rate_control_limit(pr, res.t_hat.value_or(0.0));
    }
}

int cmd_cost(const Scenario& sc, const cbm::Policy& policy, const Output& out) {
    if (policy.defer) {
        const double t = policy.kind == cbm::PolicyKind::ControlLimit ? policy.t_tilde
                         : policy.kind == cbm::PolicyKind::OnlySO     ? sc.params.tau
                                                                      : 0.0;
        if (policy.kind == cbm::PolicyKind::NeverPM || policy.kind == cbm::PolicyKind::OnlyUSO)
            throw cbm::DomainError("policy",
                                   "closed-form deferral evaluation covers SO-repairing "
                                   "policies; use `simulate` for this combination");
        const cbm::DeferralResult res = cbm::cost_rate_deferral(sc.params, t);
        if (out.format == "csv") {
            out.write("rate,cycle_cost,cycle_length,p_u\n" + num(res.rate) + "," +
                      num(res.cycle_cost) + "," + num(res.cycle_length) + "," + num(res.p_u) +
                      "\n");
        } else {
            out.write(json{{"rate", res.rate},
                           {"cycle_cost", res.cycle_cost},
                           {"cycle_length", res.cycle_length},
                           {"p_u", res.p_u}}
                          .dump(2) +
                      "\n");
        }
        return 0;
    }
    const cbm::CostBreakdown cb = cbm::cost_rate_policy(sc.params, policy);
    if (out.format == "csv") {
        out.write("so_pm,uso_pm,cm,total\n" + num(cb.so_pm) + "," + num(cb.uso_pm) + "," +
                  num(cb.cm) + "," + num(cb.total) + "\n");
    } else {
        out.write(breakdown_json(cb).dump(2) + "\n");
    }
    return 0;
}

int cmd_optimize(const Scenario& sc, bool defer, double grid_step, const Output& out) {
    json result;
    if (defer) {
        const cbm::DeferralOptimum opt =
            cbm::optimize_deferral_threshold(sc.params, grid_step);
        result = {{"defer", true}, {"t_tilde", opt.t_tilde}, {"cost", opt.rate}};
    } else {
        const cbm::OptimalPolicyResult res = cbm::classify_optimal(sc.params);
        result = {{"defer", false},
                  {"regime", regime_name(res.regime)},
                  {"cost", res.cost.total},
                  {"breakdown", breakdown_json(res.cost)}};
        if (res.t_hat) result["t_hat"] = *res.t_hat;
        if (std::isfinite(res.t_star_raw)) result["t_star_raw"] = res.t_star_raw;
    }
    out.write(result.dump(2) + "\n");
    return 0;
}

int cmd_table2(const Scenario& sc, bool raw, const Output& out) {
    const std::vector<double> taus = {0.25, 0.5, 1.0};
    const std::vector<double> c_usos = {2000, 3000, 4000};
    const std::vector<double> lambdas = {0.5, 1.0, 2.0, 4.0};
    std::vector<std::vector<double>> rows;
    for (double tau : taus) {
        for (double c_uso : c_usos) {
            for (double lambda : lambdas) {
                cbm::ModelParams pr = sc.params;
                pr.tau = tau;
                pr.c_pm_uso = c_uso;
                pr.lambda = lambda;
                const double pi_uso = cbm::cost_rate_only_uso(pr).total;
                const double pi_so = cbm::cost_rate_only_so(pr).total;
                const double pi_opt = cbm::optimal_cost(pr).total;
                const double pi_p1 = perfect_threshold_cost_at_true_p(pr).total;
                auto present = [&](double x) {
                    return raw ? x : static_cast<double>(std::llround(x));
                };
                rows.push_back({tau, c_uso, lambda, present(pi_uso), present(pi_so),
                                present(pi_opt), present(pi_p1)});
            }
        }
    }
    out.write(render_rows(
        out, {"tau", "c_pm_uso", "lambda", "pi_uso", "pi_so", "pi_opt", "pi_prime_opt"},
        rows));
    return 0;
}

int cmd_delta_p(const Scenario& sc, const Output& out) {
    const auto points = cbm::delta_p(sc.params, cbm::default_p_grid());
    std::vector<std::vector<double>> rows;
    for (const auto& pt : points) rows.push_back({pt.p, pt.delta_percent, pt.t_hat});
    out.write(render_rows(out, {"p", "delta_percent", "t_hat"}, rows));
    return 0;
}

int cmd_defer_compare(const Scenario& sc, double grid_step, const Output& out) {
    std::vector<std::vector<double>> rows;
    for (double t = 0.0; t < sc.params.tau + 0.5 * grid_step; t += grid_step) {
        const double tt = std::min(t, sc.params.tau);
        rows.push_back({tt, cbm::cost_rate_deferral(sc.params, tt).rate,
                        cbm::cost_rate_control_limit(sc.params, tt).total});
        if (tt >= sc.params.tau) break;
    }
    out.write(render_rows(out, {"t_tilde", "rate_defer", "rate_nodefer"}, rows));
    return 0;
}

int cmd_simulate(const Scenario& sc, const cbm::Policy& policy, const cbm::SimConfig& cfg,
                 const Output& out) {
    const cbm::SimEstimate est = cbm::simulate(sc.params, policy, cfg);
    json result = {{"rate", est.rate},
                   {"std_err", est.std_err},
                   {"ci95", est.ci95},
                   {"policy", kind_name(policy.kind)},
                   {"defer", policy.defer},
                   {"horizon", cfg.horizon},
                   {"replications", cfg.replications},
                   {"seed", cfg.seed},
                   {"events_per_year",
                    {{"cm", est.counts.cm},
                     {"so_success", est.counts.so_success},
                     {"so_fail", est.counts.so_fail},
                     {"uso_success", est.counts.uso_success},
                     {"uso_fail", est.counts.uso_fail}}}};
    if (policy.kind == cbm::PolicyKind::ControlLimit) result["t_tilde"] = policy.t_tilde;
    out.write(result.dump(2) + "\n");
    return 0;
}

int cmd_verify(const Scenario& sc, const cbm::SimConfig& cfg, const Output& out) {
    json report;
    bool all_pass = true;

    // Regime conditions from the value-difference construction (only defined
    // for the c_pm_so < c_pm_uso ordering).
    if (sc.params.c_pm_so < sc.params.c_pm_uso && sc.params.p < 1.0) {
        const cbm::OptimalPolicyResult res = cbm::classify_optimal(sc.params);
        const cbm::RegimeReport regime = cbm::check_regime_conditions(sc.params, res);
        json checks = json::array();
        for (const auto& chk : regime.checks) {
            checks.push_back(
                {{"name", chk.name}, {"pass", chk.pass}, {"residual", chk.residual}});
            all_pass = all_pass && chk.pass;
        }
        report["regime"] = {{"classified", regime_name(res.regime)}, {"checks", checks}};
    } else {
        report["regime"] = "skipped (requires c_pm_so < c_pm_uso and p < 1)";
    }

    // Closed form vs simulation, with and without deferral.
    const double t_tilde = sc.policy && sc.policy->kind == cbm::PolicyKind::ControlLimit
                               ? sc.policy->t_tilde
                               : 0.5 * sc.params.tau;
    const double formula = cbm::cost_rate_control_limit(sc.params, t_tilde).total;
    const cbm::SimEstimate sim =
        cbm::simulate(sc.params, cbm::policy_control_limit(t_tilde), cfg);
    const bool sim_ok = std::abs(formula - sim.rate) <= 3.0 * sim.std_err;
    all_pass = all_pass && sim_ok;
    report["control_limit_vs_sim"] = {{"t_tilde", t_tilde},
                                      {"formula", formula},
                                      {"simulated", sim.rate},
                                      {"std_err", sim.std_err},
                                      {"pass", sim_ok}};

    const double defer_formula = cbm::cost_rate_deferral(sc.params, t_tilde).rate;
    const cbm::SimEstimate defer_sim =
        cbm::simulate(sc.params, cbm::policy_control_limit(t_tilde, true), cfg);
    const bool defer_ok = std::abs(defer_formula - defer_sim.rate) <= 3.0 * defer_sim.std_err;
    all_pass = all_pass && defer_ok;
    report["deferral_vs_sim"] = {{"t_tilde", t_tilde},
                                 {"formula", defer_formula},
                                 {"simulated", defer_sim.rate},
                                 {"std_err", defer_sim.std_err},
                                 {"pass", defer_ok}};

    report["pass"] = all_pass;
    out.write(report.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Policy analytics for opportunistic condition-based maintenance"};
    app.require_subcommand(1);
    app.fallthrough();  // allow --scenario/--out/--format after the subcommand

    std::string scenario_path;
    Output out{"", "json"};
    app.add_option("--scenario", scenario_path, "JSON scenario file")->required();
    app.add_option("--out", out.path, "output file (default stdout)");
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string policy_name = "limit";
    double t_tilde = 0.0;
    bool defer = false;
    double grid_step = 0.001;
    bool raw = false;
    cbm::SimConfig sim_cfg;

    auto add_policy_flags = [&](CLI::App* cmd) {
        cmd->add_option("--policy", policy_name, "never|so|uso|limit");
        cmd->add_option("--t-tilde", t_tilde, "control-limit threshold");
        cmd->add_flag("--defer", defer, "defer planned maintenance");
    };
    auto add_sim_flags = [&](CLI::App* cmd) {
        cmd->add_option("--horizon", sim_cfg.horizon, "years per replication");
        cmd->add_option("--reps", sim_cfg.replications, "replications");
        cmd->add_option("--seed", sim_cfg.seed, "random seed");
    };

    CLI::App* cost = app.add_subcommand("cost", "evaluate a policy's long-run cost rate");
    add_policy_flags(cost);
    CLI::App* optimize = app.add_subcommand("optimize", "find the optimal policy");
    optimize->add_flag("--defer", defer, "optimize the deferral threshold by grid search");
    optimize->add_option("--grid-step", grid_step, "grid step for --defer");
    CLI::App* table2 = app.add_subcommand("table2", "cost-rate sensitivity grid");
    table2->add_flag("--raw", raw, "unrounded values");
    app.add_subcommand("delta-p", "imperfect-maintenance penalty sweep");
    CLI::App* defer_compare =
        app.add_subcommand("defer-compare", "deferral vs no-deferral cost curves");
    defer_compare->add_option("--grid-step", grid_step, "threshold grid step")
        ->default_val(0.005);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate");
    add_policy_flags(simulate);
    add_sim_flags(simulate);
    CLI::App* verify =
        app.add_subcommand("verify", "regime-condition and formula-vs-simulation checks");
    add_sim_flags(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (out.format != "json" && out.format != "csv") out.format = "json";
        const Scenario sc = load_scenario(scenario_path);

        cbm::Policy policy = sc.policy.value_or(cbm::policy_control_limit(0.0));
        if (cost->parsed() || simulate->parsed()) {
            CLI::App* cmd = cost->parsed() ? cost : simulate;
            if (cmd->count("--policy")) policy.kind = parse_kind(policy_name);
            if (cmd->count("--t-tilde")) policy.t_tilde = t_tilde;
            if (cmd->count("--defer")) policy.defer = defer;
            if (policy.kind != cbm::PolicyKind::ControlLimit) policy.t_tilde = 0.0;
            cbm::check_policy(sc.params, policy);
        }

        if (cost->parsed()) return cmd_cost(sc, policy, out);
        if (optimize->parsed()) return cmd_optimize(sc, defer, grid_step, out);
        if (table2->parsed()) return cmd_table2(sc, raw, out);
        if (app.get_subcommand("delta-p")->parsed()) return cmd_delta_p(sc, out);
        if (defer_compare->parsed()) return cmd_defer_compare(sc, grid_step, out);
        if (simulate->parsed()) return cmd_simulate(sc, policy, sim_cfg, out);
        if (verify->parsed()) return cmd_verify(sc, sim_cfg, out);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const cbm::DomainError& e) {
        std::cerr << "input error (" << e.field << "): " << e.what() << "\n";
        return 2;
    } catch (const cbm::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
