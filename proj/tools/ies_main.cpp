// Command line front end: train, dispatch, compare, emergency, make-scenario.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ies/baselines.hpp"
#include "ies/config.hpp"
#include "ies/dppo.hpp"
#include "ies/errors.hpp"
#include "ies/neuralnet.hpp"
#include "ies/reports.hpp"
#include "ies/util.hpp"

namespace fs = std::filesystem;
using namespace ies;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInfeasible = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string checkpoint_path;
    std::string scenario_path;
    std::optional<std::size_t> episodes;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "Config file (key = value lines)");
    cmd->add_option("--seed", f.seed, "Master seed override");
    cmd->add_option("--out", f.out_dir, "Output directory override");
    cmd->add_option("--checkpoint", f.checkpoint_path, "Checkpoint file path");
    cmd->add_option("--scenario", f.scenario_path, "Scenario CSV override");
    cmd->add_option("--episodes", f.episodes, "Training episode budget override");
}

RunConfig resolve_config(const CommonFlags& f) {
    RunConfig cfg = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
    if (f.seed) cfg.seed = *f.seed;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (!f.scenario_path.empty()) cfg.scenario_path = f.scenario_path;
    if (f.episodes) cfg.ppo.episodes_total = *f.episodes;
    return cfg;
}

std::string checkpoint_path(const CommonFlags& f, const RunConfig& cfg) {
    if (!f.checkpoint_path.empty()) return f.checkpoint_path;
    return (fs::path(cfg.out_dir) / "checkpoint.json").string();
}

Checkpoint load_checkpoint_for(const IesEnv& env, const std::string& path) {
    Checkpoint cp = load_checkpoint(path);
    if (cp.actor.mean_net.input_dim() != env.obs_dim() ||
        cp.actor.mean_net.output_dim() != env.action_dim()) {
        throw ConfigError("checkpoint '" + path + "' expects " +
                          std::to_string(cp.actor.mean_net.input_dim()) + "-dim observations, " +
                          "environment produces " + std::to_string(env.obs_dim()));
    }
    return cp;
}

int cmd_train(const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const Scenario base = resolve_scenario(cfg);
    const EnvConfig env_cfg = make_env_config(cfg, base);
    const SceneGenConfig scene_cfg = make_scene_config(cfg, base);

    fs::create_directories(cfg.out_dir);
    const std::string log_path = (fs::path(cfg.out_dir) / "train_log.csv").string();
    std::ofstream log(log_path);
    if (!log) throw ConfigError("cannot write '" + log_path + "'");
    log << kTrainLogHeader << "\n";

    TrainCallbacks cb;
    cb.on_episode = [&](const TrainLogRow& row) {
        log << format_train_log_row(row) << "\n";
        if (row.episode % 1000 == 0) {
            std::cerr << "episode " << row.episode << "  ma_reward "
                      << format_double(row.ma_reward) << "  " << format_double(row.seconds)
                      << " s\n";
        }
    };

    const TrainResult res = train(env_cfg, scene_cfg, cfg.ppo, cfg.seed, cb);
    log.flush();
    if (!log) throw ConfigError("failed writing '" + log_path + "'");

    const std::string cp_path = checkpoint_path(flags, cfg);
    save_checkpoint(res.checkpoint, cp_path);

    const ConvergenceReport rep = assess_convergence(res.log);
    std::cout << "train: " << (rep.improved && rep.plateau ? "converged (reward plateau)"
                                                           : "episode budget exhausted without plateau")
              << " after " << res.log.size() << " episodes, final ma_reward "
              << format_double(rep.final_decile_avg) << ", " << format_double(res.train_seconds)
              << " s\n";
    std::cout << "train: wrote " << log_path << " and " << cp_path << "\n";
    return kExitOk;
}

int cmd_dispatch(const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const Scenario day = resolve_scenario(cfg);
    const IesEnv env(make_env_config(cfg, day), day);
    const Checkpoint cp = load_checkpoint_for(env, checkpoint_path(flags, cfg));

    const EpisodeEval ev = evaluate_policy(env, cp.actor);
    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "dispatch.csv").string();
    write_dispatch_csv(dispatch_rows(day, ev.steps), path);
    std::cout << "dispatch: cost " << format_double(ev.total_cost) << ", total imbalance "
              << format_double(ev.total_imbalance) << " kW over " << ev.steps.size()
              << " periods\n";
    std::cout << "dispatch: wrote " << path << "\n";
    return kExitOk;
}

int cmd_compare(const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const Scenario day = resolve_scenario(cfg);
    const IesEnv env(make_env_config(cfg, day), day);
    const Checkpoint cp = load_checkpoint_for(env, checkpoint_path(flags, cfg));

    std::vector<CompareRow> rows;

    const EpisodeEval ev = evaluate_policy(env, cp.actor);
    std::vector<double> times(100);
    for (double& t : times) {
        const auto t0 = std::chrono::steady_clock::now();
        evaluate_policy(env, cp.actor);
        t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
    rows.push_back({"dppo", ev.total_cost, times[times.size() / 2], cp.train_seconds});

    SwarmConfig sw = cfg.swarm;
    sw.seed = swarm_seed(cfg);
    const SwarmResult pso = pso_dispatch(env, sw);
    rows.push_back({"pso", pso.mean_cost, pso.mean_seconds, std::nullopt});
    const SwarmResult woa = woa_dispatch(env, sw);
    rows.push_back({"woa", woa.mean_cost, woa.mean_seconds, std::nullopt});

    const DpResult dp = dp_oracle(day, cfg.grid, cfg.devices, cfg.costs);
    if (!dp.feasible) {
        throw InfeasibleError("oracle grid found no feasible dispatch at period " +
                              std::to_string(dp.infeasible_period + 1));
    }
    rows.push_back({"dp_oracle", dp.total_cost, dp.solve_seconds, std::nullopt});

    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "compare.csv").string();
    write_compare_csv(rows, path);

    for (const CompareRow& r : rows) {
        std::cout << r.method << ": cost " << format_double(r.operating_cost) << ", solve "
                  << format_double(r.calc_time_s) << " s\n";
    }
    double pso_mean_imb = 0.0;
    for (const SwarmRunStat& r : pso.runs) pso_mean_imb += r.imbalance;
    if (!pso.runs.empty()) pso_mean_imb /= static_cast<double>(pso.runs.size());
    std::cout << "compare: policy imbalance " << format_double(ev.total_imbalance)
              << " kW, pso mean imbalance " << format_double(pso_mean_imb) << " kW\n";
    std::cout << "compare: wrote " << path << "\n";
    return kExitOk;
}

int cmd_emergency(const CommonFlags& flags, const std::string& spec) {
    const RunConfig cfg = resolve_config(flags);
    const Scenario day = resolve_scenario(cfg);
    const Emergency em = parse_emergency_spec(spec);
    const EmergencyResult er = apply_emergency(day, em);
    if (er.clamped) {
        std::cerr << "emergency: delta clamped, " << stream_name(em.stream)
                  << " cannot go below 0\n";
    }

    const EnvConfig env_cfg = make_env_config(cfg, day);
    const IesEnv env_base(env_cfg, day);
    const IesEnv env_pert(env_cfg, er.scenario);
    const Checkpoint cp = load_checkpoint_for(env_base, checkpoint_path(flags, cfg));

    const EpisodeEval ev_base = evaluate_policy(env_base, cp.actor);
    const EpisodeEval ev_pert = evaluate_policy(env_pert, cp.actor);

    fs::create_directories(cfg.out_dir);
    const std::string base_path = (fs::path(cfg.out_dir) / "dispatch_baseline.csv").string();
    const std::string pert_path = (fs::path(cfg.out_dir) / "dispatch_perturbed.csv").string();
    write_dispatch_csv(dispatch_rows(day, ev_base.steps), base_path);
    write_dispatch_csv(dispatch_rows(er.scenario, ev_pert.steps), pert_path);

    const std::size_t t = em.period;
    const StepInfo& sb = ev_base.steps.at(t);
    const StepInfo& sp = ev_pert.steps.at(t);
    const std::string sum_path = (fs::path(cfg.out_dir) / "emergency_summary.csv").string();
    std::ofstream sum(sum_path);
    if (!sum) throw ConfigError("cannot write '" + sum_path + "'");
    sum << "quantity,baseline,perturbed,delta\n";
    auto line = [&](const char* name, double b, double p) {
        sum << name << ',' << format_double(b) << ',' << format_double(p) << ','
            << format_double(p - b) << "\n";
        std::cout << "  " << name << ": " << format_double(b) << " -> " << format_double(p)
                  << "\n";
    };
    std::cout << "emergency " << spec << " (period " << t + 1 << "):\n";
    line("p_chp", sb.decision.p_chp, sp.decision.p_chp);
    line("h_chp", sb.decision.h_chp, sp.decision.h_chp);
    line("p_cwp", sb.decision.p_cwp, sp.decision.p_cwp);
    line("w_cwp", sb.decision.w_cwp, sp.decision.w_cwp);
    line("p_gt", sb.decision.p_gt, sp.decision.p_gt);
    line("h_gb", sb.decision.h_gb, sp.decision.h_gb);
    line("imbalance_d", sb.imbalance_d, sp.imbalance_d);
    line("cost", sb.cost_total, sp.cost_total);
    if (!sum) throw ConfigError("failed writing '" + sum_path + "'");
    std::cout << "emergency: wrote " << base_path << ", " << pert_path << ", " << sum_path
              << "\n";
    return kExitOk;
}

int cmd_make_scenario(const CommonFlags& flags, const std::string& out_file, bool noisy) {
    const RunConfig cfg = resolve_config(flags);
    const Scenario base = resolve_scenario(cfg);
    const Scenario result = noisy ? generate_scene(make_scene_config(cfg, base)) : base;
    save_scenario(result, out_file);
    std::cout << "make-scenario: wrote " << out_file << " (" << result.periods()
              << " periods)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Island electricity/heat/freshwater dispatch toolkit"};
    app.require_subcommand(1);

    CommonFlags train_flags;
    CLI::App* train_cmd = app.add_subcommand("train", "Train the dispatch policy");
    add_common_flags(train_cmd, train_flags);

    CommonFlags dispatch_flags;
    CLI::App* dispatch_cmd =
        app.add_subcommand("dispatch", "Run the trained policy over one day");
    add_common_flags(dispatch_cmd, dispatch_flags);

    CommonFlags compare_flags;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Policy vs PSO, WOA and the exact grid oracle");
    add_common_flags(compare_cmd, compare_flags);

    CommonFlags emergency_flags;
    std::string emergency_spec;
    CLI::App* emergency_cmd =
        app.add_subcommand("emergency", "Replay a day with one perturbed period");
    add_common_flags(emergency_cmd, emergency_flags);
    emergency_cmd
        ->add_option("spec", emergency_spec,
                     "Perturbation, e.g. p_load@1+1000 or p_wt@20=zero (1-based period)")
        ->required();

    CommonFlags mksc_flags;
    std::string mksc_out;
    bool mksc_noisy = false;
    CLI::App* mksc_cmd = app.add_subcommand("make-scenario", "Write a scenario CSV");
    add_common_flags(mksc_cmd, mksc_flags);
    mksc_cmd->add_option("path", mksc_out, "Output CSV path")->required();
    mksc_cmd->add_flag("--noisy", mksc_noisy, "Apply the configured scene noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(train_flags);
        if (dispatch_cmd->parsed()) return cmd_dispatch(dispatch_flags);
        if (compare_cmd->parsed()) return cmd_compare(compare_flags);
        if (emergency_cmd->parsed()) return cmd_emergency(emergency_flags, emergency_spec);
        if (mksc_cmd->parsed()) return cmd_make_scenario(mksc_flags, mksc_out, mksc_noisy);
        std::cerr << "error: no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
