// Acceptance gate: ten criteria, one pass/fail line each, exit code equals
// the number of failures. Slow criteria (training) run the ies binary passed
// via --cli; --reuse keeps artifacts from a previous gate run.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ies/baselines.hpp"
#include "ies/config.hpp"
#include "ies/dppo.hpp"
#include "ies/env.hpp"
#include "ies/errors.hpp"
#include "ies/neuralnet.hpp"
#include "ies/reports.hpp"
#include "ies/scenario.hpp"
#include "ies/util.hpp"

namespace fs = std::filesystem;
using namespace ies;

namespace {

// Pinned tolerances and budgets.
constexpr std::size_t kA1Cases = 100000;
constexpr double kA1BudgetS = 60.0;
constexpr double kA2RelTol = 1e-4;
constexpr int kA2Configs = 100;
constexpr double kA2BudgetS = 60.0;
constexpr double kA3RelTol = 1e-10;
constexpr int kA3Trajectories = 1000;
constexpr double kA4RefineSlack = 1e-9;
constexpr double kA4BudgetS = 300.0;
constexpr double kA5BudgetS = 3600.0;
constexpr std::size_t kA5MaWindow = 500;
constexpr double kA6CostFactor = 1.10;
constexpr double kA6NormImbTol = 0.02;
constexpr int kA6MinGoodPeriods = 22;
constexpr double kA8MinSpeedup = 100.0;
constexpr double kA9NormImbTol = 0.05;
constexpr int kA9MinPass = 5;

struct Options {
    std::string cli;
    std::string out = "acceptance_out";
    bool reuse = false;
    std::vector<std::string> only;
};

Options g_opt;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc != 0) std::cerr << "command failed (" << rc << "): " << cmd << "\n";
    return rc;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-12});
}

DispatchDecision random_decision(Rng& rng) {
    DispatchDecision d;
    d.p_chp = rng.uniform(-2000.0, 9000.0);
    d.h_chp = rng.uniform(-2000.0, 9000.0);
    d.p_cwp = rng.uniform(-2000.0, 9000.0);
    d.w_cwp = rng.uniform(-100.0, 900.0);
    d.p_gt = rng.uniform(-2000.0, 6000.0);
    d.h_gb = rng.uniform(-2000.0, 6000.0);
    return d;
}

// --- A1: randomized physics/cost identity suite -----------------------------

std::string a1_physics_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const DeviceParams dev;
    const CostParams costs;
    const HstParams hst;
    Rng rng(101);
    DispatchDecision prev = neutral_decision(dev);
    std::size_t cases = 0;

    for (std::size_t i = 0; i < kA1Cases; ++i, ++cases) {
        // Projection feasibility and idempotence along a random walk.
        const DispatchDecision raw = random_decision(rng);
        const DispatchDecision d = project_feasible(raw, prev, dev);
        if (!step_feasible(d, prev, dev)) {
            return "projection produced an infeasible decision at case " + std::to_string(i);
        }
        const DispatchDecision d2 = project_feasible(d, prev, dev);
        if (std::abs(d2.p_chp - d.p_chp) > 1e-9 || std::abs(d2.w_cwp - d.w_cwp) > 1e-9 ||
            std::abs(d2.p_cwp - d.p_cwp) > 1e-9 || std::abs(d2.h_chp - d.h_chp) > 1e-9) {
            return "projection is not idempotent at case " + std::to_string(i);
        }

        // Fuel cost = gas price x calorific value, device by device.
        const Calorifics h = calorific_values(d, costs, dev.cwp.q_coeff);
        const FuelCosts m = device_fuel_costs(d, costs, dev.cwp.q_coeff);
        if (rel_err(m.m_chp, costs.gas_price * h.h_chp) > 1e-12 ||
            rel_err(m.m_cwp, costs.gas_price * h.h_cwp) > 1e-12 ||
            rel_err(m.m_gt, costs.gas_price * h.h_gt) > 1e-12 ||
            rel_err(m.m_gb, costs.gas_price * h.h_gb) > 1e-12) {
            return "fuel/calorific identity broke at case " + std::to_string(i);
        }

        // Cost monotonicity: more output from any device never costs less.
        if (i % 10 == 0) {
            const double base = total_cost(d, costs, dev.cwp.q_coeff);
            DispatchDecision up = d;
            up.p_gt += 100.0;
            if (total_cost(up, costs, dev.cwp.q_coeff) <= base) {
                return "cost not increasing in p_gt at case " + std::to_string(i);
            }
            up = d;
            up.h_gb += 100.0;
            if (total_cost(up, costs, dev.cwp.q_coeff) <= base) {
                return "cost not increasing in h_gb at case " + std::to_string(i);
            }
        }

        // HST round-trip: the temperature solved for a load reproduces it.
        if (i % 4 == 0) {
            const double g = rng.uniform(5.0, 200.0);
            const double t_sw = rng.uniform(hst.t_return + 1.0, hst.t_max);
            const double carried = hst_carried_heat(g, t_sw, hst.t_return, hst.c_w);
            const double back = hst_required_supply_temp(carried, g, hst.t_return, hst.c_w);
            if (rel_err(back, t_sw) > 1e-9) {
                return "HST temperature round-trip failed at case " + std::to_string(i);
            }
            const double h_load = rng.uniform(0.0, 8000.0);
            const double w = rng.uniform(18.0, 625.0);
            const double t_env = rng.uniform(-5.0, 35.0);
            const HstAnalysis a = analyze_hst(h_load, w, t_env, hst);
            if (a.feasible) {
                const double delivered =
                    hst_carried_heat(a.flow_kg_s, a.supply_temp, hst.t_return, hst.c_w) -
                    a.loss_kw;
                if (a.supply_temp > hst.t_min + 1e-9) {
                    // Interior solution: the pipe delivers the load exactly.
                    if (rel_err(delivered, h_load) > 1e-9 &&
                        std::abs(delivered - h_load) > 1e-6) {
                        return "HST delivery mismatch at case " + std::to_string(i);
                    }
                } else if (delivered < h_load - 1e-6) {
                    // At the band minimum the pipe may only over-deliver.
                    return "HST under-delivery at the band minimum at case " +
                           std::to_string(i);
                }
            }
        }
        prev = d;
    }

    const double dt = seconds_since(t0);
    if (dt > kA1BudgetS) return "suite exceeded its budget: " + format_double(dt) + " s";
    return "";
}

// --- A2: gradient oracle ----------------------------------------------------

std::string a2_gradient_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(202);
    const double h = 1e-5;

    for (int cfg_i = 0; cfg_i < kA2Configs; ++cfg_i) {
        if (cfg_i % 2 == 0) {
            // Plain network gradient against a random linear objective.
            const std::size_t in = 2 + rng.uniform_below(5);
            const std::size_t hid = 2 + rng.uniform_below(11);
            const std::size_t out = 1 + rng.uniform_below(6);
            Mlp net = Mlp::create({in, hid, out}, rng, rng.uniform(0.05, 2.0));
            std::vector<double> x(in);
            for (double& v : x) v = rng.uniform(-1.5, 1.5);
            std::vector<double> up(out);
            for (double& v : up) v = rng.uniform(-2.0, 2.0);

            ForwardTrace trace;
            forward(net, x, trace);
            std::vector<double> grad(net.param_count(), 0.0);
            backward(net, trace, up, grad);

            auto objective = [&](const Mlp& n) {
                const std::vector<double> y = forward(n, x);
                double s = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i) s += up[i] * y[i];
                return s;
            };
            for (std::size_t i = 0; i < net.param_count(); ++i) {
                Mlp plus = net, minus = net;
                plus.params[i] += h;
                minus.params[i] -= h;
                const double fd = (objective(plus) - objective(minus)) / (2.0 * h);
                if (std::abs(grad[i] - fd) >
                    kA2RelTol * std::max({std::abs(grad[i]), std::abs(fd), 1e-4})) {
                    return "network gradient off at config " + std::to_string(cfg_i) +
                           " param " + std::to_string(i);
                }
            }
        } else {
            // Policy log-density gradient in mean-net parameters and log_std.
            GaussianPolicy pol;
            const std::size_t hid = 4 + rng.uniform_below(9);
            pol.mean_net = Mlp::create({4, hid, kActionDim}, rng, rng.uniform(0.1, 1.0));
            for (double& v : pol.log_std) v = rng.uniform(-2.0, 1.0);
            std::vector<double> obs(4);
            for (double& v : obs) v = rng.uniform(-1.0, 1.0);
            std::array<double, kActionDim> action{};
            for (double& a : action) a = rng.uniform(-2.0, 2.0);
            const double coeff = rng.uniform(0.5, 2.0);

            ForwardTrace trace;
            forward(pol.mean_net, obs, trace);
            std::vector<double> grad_mean(pol.mean_net.param_count(), 0.0);
            std::array<double, kActionDim> grad_ls{};
            policy_log_prob_backward(pol, trace, action, coeff, grad_mean, grad_ls);

            for (std::size_t i = 0; i < grad_mean.size(); ++i) {
                GaussianPolicy plus = pol, minus = pol;
                plus.mean_net.params[i] += h;
                minus.mean_net.params[i] -= h;
                const double fp = policy_log_prob(plus, forward(plus.mean_net, obs), action);
                const double fm = policy_log_prob(minus, forward(minus.mean_net, obs), action);
                const double fd = coeff * (fp - fm) / (2.0 * h);
                if (std::abs(grad_mean[i] - fd) >
                    kA2RelTol * std::max({std::abs(grad_mean[i]), std::abs(fd), 1e-4})) {
                    return "log_prob mean gradient off at config " + std::to_string(cfg_i);
                }
            }
            const std::vector<double> mean = forward(pol.mean_net, obs);
            for (std::size_t i = 0; i < kActionDim; ++i) {
                GaussianPolicy plus = pol, minus = pol;
                plus.log_std[i] += h;
                minus.log_std[i] -= h;
                const double fd = coeff *
                                  (policy_log_prob(plus, mean, action) -
                                   policy_log_prob(minus, mean, action)) /
                                  (2.0 * h);
                if (std::abs(grad_ls[i] - fd) >
                    kA2RelTol * std::max({std::abs(grad_ls[i]), std::abs(fd), 1e-4})) {
                    return "log_prob sigma gradient off at config " + std::to_string(cfg_i);
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    if (dt > kA2BudgetS) return "oracle exceeded its budget: " + format_double(dt) + " s";
    return "";
}

// --- A3: return oracle --------------------------------------------------------

std::string a3_return_oracle() {
    const std::vector<double> frozen = compute_returns({0.0, 0.0, 1.0}, 0.5);
    if (frozen != std::vector<double>{0.25, 0.5, 1.0}) {
        return "frozen case [0,0,1] at gamma 0.5 did not return [0.25,0.5,1] exactly";
    }
    Rng rng(303);
    for (int trial = 0; trial < kA3Trajectories; ++trial) {
        std::vector<double> rewards(24);
        for (double& r : rewards) r = rng.uniform(-3.0, 3.0);
        const double gamma = rng.uniform01();
        const std::vector<double> fast = compute_returns(rewards, gamma);
        for (std::size_t t = 0; t < rewards.size(); ++t) {
            double acc = 0.0;
            double g = 1.0;
            for (std::size_t u = t; u < rewards.size(); ++u) {
                acc += g * rewards[u];
                g *= gamma;
            }
            if (rel_err(fast[t], acc) > kA3RelTol) {
                return "returns diverge from the quadratic oracle at trial " +
                       std::to_string(trial);
            }
        }
    }
    return "";
}

// --- A4: dp oracle equivalence and refinement monotonicity -------------------

std::string a4_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const DeviceParams dev;
    const CostParams costs;
    const double q = dev.cwp.q_coeff;

    Scenario day2;
    day2.p_load = {7000.0, 10000.0};
    day2.h_load = {3500.0, 5000.0};
    day2.w_load = {180.0, 180.0};
    day2.p_wt = {500.0, 1000.0};
    day2.t_env = {15.0, 10.0};

    auto grid_points = [](double lo, double hi, std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        return v;
    };
    const std::vector<double> pc = grid_points(dev.chp.p_min, dev.chp.p_max, 3);
    const std::vector<double> bs = grid_points(dev.chp.b_min, dev.chp.b_max, 3);
    const std::vector<double> pg = grid_points(dev.gt.p_min, dev.gt.p_max, 3);
    const DispatchDecision neutral = neutral_decision(dev);

    double best = std::numeric_limits<double>::infinity();
    std::size_t sequences = 0;
    for (std::size_t i0 = 0; i0 < 3; ++i0)
        for (std::size_t k0 = 0; k0 < 3; ++k0)
            for (std::size_t j0 = 0; j0 < 3; ++j0)
                for (std::size_t i1 = 0; i1 < 3; ++i1)
                    for (std::size_t k1 = 0; k1 < 3; ++k1)
                        for (std::size_t j1 = 0; j1 < 3; ++j1) {
                            ++sequences;
                            const auto d0 = reduce_decision(pc[i0], bs[k0], pg[j0],
                                                            slice(day2, 0), dev);
                            const auto d1 = reduce_decision(pc[i1], bs[k1], pg[j1],
                                                            slice(day2, 1), dev);
                            if (!d0 || !d1) continue;
                            if (!step_feasible(*d0, neutral, dev)) continue;
                            if (!step_feasible(*d1, *d0, dev)) continue;
                            const double c = total_cost(*d0, costs, q) +
                                             total_cost(*d1, costs, q);
                            best = std::min(best, c);
                        }
    if (sequences != 729) return "enumeration should cover 729 sequences";

    const DpResult dp2 = dp_oracle(day2, GridSpec{3, 3, 3, 2'000'000}, dev, costs);
    if (!dp2.feasible) return "dp reports infeasible on the enumerable instance";
    if (dp2.total_cost != best) {
        return "dp cost " + format_double(dp2.total_cost) + " differs from enumeration " +
               format_double(best);
    }

    const Scenario day = default_base_day();
    const GridSpec base_grid{21, 15, 16, 2'000'000};
    const DpResult coarse = dp_oracle(day, base_grid, dev, costs);
    if (!coarse.feasible) return "dp infeasible on the default day at 21x15x16";
    const DpResult fine = dp_oracle(day, base_grid.refined(), dev, costs);
    if (!fine.feasible) return "dp infeasible on the default day at the refined grid";
    if (fine.total_cost > coarse.total_cost + kA4RefineSlack) {
        return "refining the grid increased cost: " + format_double(coarse.total_cost) +
               " -> " + format_double(fine.total_cost);
    }
    const double dt = seconds_since(t0);
    if (dt > kA4BudgetS) return "oracle runs exceeded the budget: " + format_double(dt) + " s";
    return "";
}

// --- A5: training convergence -------------------------------------------------

fs::path a5_dir() { return fs::path(g_opt.out) / "a5"; }
fs::path a5_checkpoint() { return a5_dir() / "checkpoint.json"; }
fs::path a5_log() { return a5_dir() / "train_log.csv"; }

std::string a5_training_convergence() {
    if (g_opt.cli.empty()) return "no --cli binary given";
    const bool have = fs::exists(a5_checkpoint()) && fs::exists(a5_log());
    double wall = -1.0;
    if (!g_opt.reuse || !have) {
        fs::create_directories(a5_dir());
        const auto t0 = std::chrono::steady_clock::now();
        const std::string cmd = quote(g_opt.cli) + " train --seed 1 --out " +
                                quote(a5_dir().string()) + " > " +
                                quote((a5_dir() / "train_stdout.log").string()) + " 2> " +
                                quote((a5_dir() / "train_stderr.log").string());
        if (run_cmd(cmd) != 0) return "training run failed";
        wall = seconds_since(t0);
    }

    const std::vector<TrainLogRow> log = read_train_log(a5_log().string());
    if (log.size() != 20000) {
        return "expected 20000 logged episodes, found " + std::to_string(log.size());
    }
    const ConvergenceReport rep = assess_convergence(log, kA5MaWindow);
    std::ostringstream detail;
    detail << "first-decile ma " << format_double(rep.first_decile_avg) << ", final "
           << format_double(rep.final_decile_avg) << " (max "
           << format_double(rep.final_decile_max) << ")";
    if (wall >= 0.0) detail << ", wall " << format_double(wall) << " s";
    std::cout << "    " << detail.str() << "\n";
    if (!rep.improved) return "final-decile moving average does not exceed the first decile";
    if (!rep.plateau) return "final decile is not within 15% of its own maximum";
    if (wall > kA5BudgetS) {
        return "training exceeded the one-hour budget: " + format_double(wall) + " s";
    }
    return "";
}

// --- shared artifacts for A6..A9 ---------------------------------------------

struct EvalContext {
    EnvConfig env_cfg;
    Scenario day;
    Checkpoint cp;
    EpisodeEval policy_eval;
};

std::optional<EvalContext> g_eval;
std::optional<DpResult> g_dp;
std::optional<SwarmResult> g_pso;
std::optional<SwarmResult> g_woa;

std::string ensure_eval_context() {
    if (g_eval) return "";
    if (!fs::exists(a5_checkpoint())) {
        return "missing " + a5_checkpoint().string() + " (run A5 first)";
    }
    EvalContext ctx;
    ctx.day = default_base_day();
    ctx.env_cfg = make_env_config(RunConfig{}, ctx.day);
    ctx.cp = load_checkpoint(a5_checkpoint().string());
    const IesEnv env(ctx.env_cfg, ctx.day);
    ctx.policy_eval = evaluate_policy(env, ctx.cp.actor);
    g_eval = std::move(ctx);
    return "";
}

std::string ensure_dp() {
    if (g_dp) return "";
    const std::string err = ensure_eval_context();
    if (!err.empty()) return err;
    g_dp = dp_oracle(g_eval->day, GridSpec{}, g_eval->env_cfg.devices, g_eval->env_cfg.costs);
    if (!g_dp->feasible) return "dp oracle infeasible on the evaluation day";
    return "";
}

std::string ensure_swarms() {
    const std::string err = ensure_eval_context();
    if (!err.empty()) return err;
    if (g_pso && g_woa) return "";
    const IesEnv env(g_eval->env_cfg, g_eval->day);
    SwarmConfig cfg;  // population 100, 600 iterations, 20 runs
    cfg.seed = 100;
    g_pso = pso_dispatch(env, cfg);
    g_woa = woa_dispatch(env, cfg);
    return "";
}

// --- A6: dispatch quality vs oracle -------------------------------------------

std::string a6_dispatch_quality() {
    std::string err = ensure_dp();
    if (!err.empty()) return err;
    const double policy_cost = g_eval->policy_eval.total_cost;
    const double dp_cost = g_dp->total_cost;
    int good_periods = 0;
    for (const StepInfo& s : g_eval->policy_eval.steps) {
        if (s.imbalance_d / g_eval->env_cfg.reward.imbalance_norm <= kA6NormImbTol) {
            ++good_periods;
        }
    }
    std::cout << "    policy cost " << format_double(policy_cost) << ", dp cost "
              << format_double(dp_cost) << " (ratio "
              << format_double(policy_cost / dp_cost) << "), periods with normalized D <= "
              << format_double(kA6NormImbTol) << ": " << good_periods << "/24\n";
    if (policy_cost > kA6CostFactor * dp_cost) {
        return "policy cost exceeds " + format_double(kA6CostFactor) + " x dp cost";
    }
    if (good_periods < kA6MinGoodPeriods) {
        return "normalized imbalance above " + format_double(kA6NormImbTol) + " in " +
               std::to_string(24 - good_periods) + " periods";
    }
    return "";
}

// --- A7: method ordering -------------------------------------------------------

std::string a7_method_ordering() {
    std::string err = ensure_swarms();
    if (!err.empty()) return err;
    const double policy_cost = g_eval->policy_eval.total_cost;
    std::cout << "    policy " << format_double(policy_cost) << ", woa mean "
              << format_double(g_woa->mean_cost) << ", pso mean "
              << format_double(g_pso->mean_cost) << "\n";
    if (policy_cost > g_woa->mean_cost) return "policy cost above the WOA average";
    if (g_woa->mean_cost > g_pso->mean_cost) return "WOA average above the PSO average";
    return "";
}

// --- A8: decision latency ------------------------------------------------------

std::string a8_latency() {
    std::string err = ensure_swarms();
    if (!err.empty()) return err;
    const IesEnv env(g_eval->env_cfg, g_eval->day);
    const EnvState st = env.reset();
    std::array<double, 100> times{};
    volatile double sink = 0.0;
    for (double& t : times) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> mean = forward(g_eval->cp.actor.mean_net, st.obs);
        sink = sink + mean[0];
        t = seconds_since(t0);
    }
    std::nth_element(times.begin(), times.begin() + 50, times.end());
    const double step_s = std::max(times[50], 1e-9);
    const double pso_day_s = g_pso->mean_seconds;
    const double ratio = pso_day_s / step_s;
    std::cout << "    policy step " << format_double(step_s) << " s, pso day-solve "
              << format_double(pso_day_s) << " s, ratio " << format_double(ratio) << "\n";
    if (ratio < kA8MinSpeedup) {
        return "inference only " + format_double(ratio) + "x faster than a PSO day-solve";
    }
    return "";
}

// --- A9: emergency robustness ---------------------------------------------------

std::string a9_emergencies() {
    std::string err = ensure_eval_context();
    if (!err.empty()) return err;
    const std::array<const char*, 6> specs = {
        "p_load@1+1000", "p_load@19-1000", "p_wt@9+800",
        "p_wt@20=zero",  "h_load@2+1000",  "h_load@14-1000",
    };
    int ok = 0;
    for (const char* spec : specs) {
        const Emergency em = parse_emergency_spec(spec);
        const EmergencyResult er = apply_emergency(g_eval->day, em);
        const IesEnv env(g_eval->env_cfg, er.scenario);
        const EpisodeEval ev = evaluate_policy(env, g_eval->cp.actor);
        const StepInfo& hit = ev.steps.at(em.period);

        const DispatchDecision prev = em.period == 0
                                          ? neutral_decision(g_eval->env_cfg.devices)
                                          : ev.steps[em.period - 1].decision;
        if (!step_feasible(hit.decision, prev, g_eval->env_cfg.devices)) {
            return std::string("perturbed-period decision violates device constraints for ") +
                   spec;
        }
        const double norm_d = hit.imbalance_d / g_eval->env_cfg.reward.imbalance_norm;
        const bool pass = norm_d <= kA9NormImbTol;
        ok += pass;

        const StepInfo& base = g_eval->policy_eval.steps.at(em.period);
        std::cout << "    " << spec << ": normalized D " << format_double(norm_d)
                  << (pass ? "" : " (above tolerance)") << ", response dp_gt "
                  << format_double(hit.decision.p_gt - base.decision.p_gt) << ", dh_gb "
                  << format_double(hit.decision.h_gb - base.decision.h_gb) << ", dp_chp "
                  << format_double(hit.decision.p_chp - base.decision.p_chp) << ", dh_chp "
                  << format_double(hit.decision.h_chp - base.decision.h_chp) << ", dw_cwp "
                  << format_double(hit.decision.w_cwp - base.decision.w_cwp) << "\n";
    }
    if (ok < kA9MinPass) {
        return "normalized D within " + format_double(kA9NormImbTol) + " for only " +
               std::to_string(ok) + "/6 emergencies";
    }
    return "";
}

// --- A10: determinism ------------------------------------------------------------

std::string strip_seconds_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t cut = line.rfind(',');
        out << line.substr(0, cut) << "\n";
    }
    return out.str();
}

std::string a10_determinism() {
    if (g_opt.cli.empty()) return "no --cli binary given";
    const fs::path d1 = fs::path(g_opt.out) / "a10_run1";
    const fs::path d2 = fs::path(g_opt.out) / "a10_run2";
    fs::create_directories(d1);
    fs::create_directories(d2);
    for (const fs::path& d : {d1, d2}) {
        const std::string cmd = quote(g_opt.cli) + " train --seed 3 --episodes 400 --out " +
                                quote(d.string()) + " > /dev/null 2> " +
                                quote((d / "stderr.log").string());
        if (run_cmd(cmd) != 0) return "short training run failed";
    }
    // The seconds column is wall-clock; every other byte must match.
    const std::string log1 = strip_seconds_column((d1 / "train_log.csv").string());
    const std::string log2 = strip_seconds_column((d2 / "train_log.csv").string());
    if (log1 != log2) return "training logs differ between identical runs";

    const Checkpoint c1 = load_checkpoint((d1 / "checkpoint.json").string());
    const Checkpoint c2 = load_checkpoint((d2 / "checkpoint.json").string());
    if (c1.actor.mean_net.params != c2.actor.mean_net.params ||
        c1.actor.log_std != c2.actor.log_std || c1.critic.params != c2.critic.params) {
        return "checkpoints differ between identical runs";
    }

    // Scene generation reproduces across processes.
    const fs::path scene_path = fs::path(g_opt.out) / "a10_scene.csv";
    const std::string cmd = quote(g_opt.cli) + " make-scenario " + quote(scene_path.string()) +
                            " --noisy --seed 123 > /dev/null";
    if (run_cmd(cmd) != 0) return "make-scenario run failed";
    RunConfig rc;
    rc.seed = 123;
    const Scenario want = generate_scene(make_scene_config(rc, default_base_day()));
    const Scenario got = load_scenario(scene_path.string(), want.periods());
    for (std::size_t t = 0; t < want.periods(); ++t) {
        if (got.p_load[t] != want.p_load[t] || got.h_load[t] != want.h_load[t] ||
            got.w_load[t] != want.w_load[t] || got.p_wt[t] != want.p_wt[t] ||
            got.t_env[t] != want.t_env[t]) {
            return "generated scene differs from the in-process generator at period " +
                   std::to_string(t + 1);
        }
    }
    return "";
}

struct Criterion {
    const char* name;
    const char* what;
    std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--cli") {
            g_opt.cli = next();
        } else if (arg == "--out") {
            g_opt.out = next();
        } else if (arg == "--reuse") {
            g_opt.reuse = true;
        } else if (arg == "--only") {
            for (const std::string& name : split(next(), ',')) {
                g_opt.only.push_back(name);
            }
        } else {
            std::cerr << "unknown argument " << arg
                      << " (expected --cli PATH, --out DIR, --reuse, --only A5,A6)\n";
            return 2;
        }
    }
    fs::create_directories(g_opt.out);

    const std::vector<Criterion> criteria = {
        {"A1", "randomized physics and cost identities", a1_physics_suite},
        {"A2", "gradients vs central finite differences", a2_gradient_oracle},
        {"A3", "discounted returns vs quadratic oracle", a3_return_oracle},
        {"A4", "dp oracle vs enumeration and grid refinement", a4_oracle_equivalence},
        {"A5", "training convergence at desk scale", a5_training_convergence},
        {"A6", "policy cost and imbalance vs dp oracle", a6_dispatch_quality},
        {"A7", "policy <= woa <= pso cost ordering", a7_method_ordering},
        {"A8", "policy inference vs pso day-solve latency", a8_latency},
        {"A9", "emergency-period feasibility and imbalance", a9_emergencies},
        {"A10", "byte-stable logs, checkpoints, and scenes", a10_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!g_opt.only.empty() &&
            std::find(g_opt.only.begin(), g_opt.only.end(), c.name) == g_opt.only.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        std::string err;
        try {
            err = c.run();
        } catch (const std::exception& e) {
            err = std::string("exception: ") + e.what();
        }
        const double dt = seconds_since(t0);
        if (err.empty()) {
            std::cout << c.name << " PASS (" << format_double(dt) << " s): " << c.what << "\n";
        } else {
            std::cout << c.name << " FAIL (" << format_double(dt) << " s): " << c.what << ": "
                      << err << "\n";
            ++failures;
        }
        std::cout.flush();
    }
    return failures;
}
