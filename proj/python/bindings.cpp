#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <array>
#include <sstream>

#include "ies/baselines.hpp"
#include "ies/config.hpp"
#include "ies/costs.hpp"
#include "ies/devices.hpp"
#include "ies/dppo.hpp"
#include "ies/env.hpp"
#include "ies/errors.hpp"
#include "ies/neuralnet.hpp"
#include "ies/scenario.hpp"

namespace py = pybind11;
using namespace ies;

namespace {

std::string decision_repr(const DispatchDecision& d) {
    std::ostringstream os;
    os << "DispatchDecision(p_chp=" << d.p_chp << ", h_chp=" << d.h_chp
       << ", p_cwp=" << d.p_cwp << ", w_cwp=" << d.w_cwp << ", p_gt=" << d.p_gt
       << ", h_gb=" << d.h_gb << ")";
    return os.str();
}

std::array<double, kActionDim> to_action(const std::vector<double>& v) {
    if (v.size() != kActionDim) throw py::value_error("action must have 6 components");
    std::array<double, kActionDim> a{};
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dispatch toolkit for an island electricity/heat/freshwater system";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<InfeasibleError>(m, "InfeasibleError");

    // --- devices and decisions ----------------------------------------------

    py::class_<ChpParams>(m, "ChpParams")
        .def(py::init<>())
        .def_readwrite("p_max", &ChpParams::p_max)
        .def_readwrite("p_min", &ChpParams::p_min)
        .def_readwrite("b_min", &ChpParams::b_min)
        .def_readwrite("b_max", &ChpParams::b_max)
        .def_readwrite("ramp_max", &ChpParams::ramp_max);

    py::class_<CwpParams>(m, "CwpParams")
        .def(py::init<>())
        .def_readwrite("p_tp_max", &CwpParams::p_tp_max)
        .def_readwrite("p_tp_min", &CwpParams::p_tp_min)
        .def_readwrite("ramp_tp_max", &CwpParams::ramp_tp_max)
        .def_readwrite("q_coeff", &CwpParams::q_coeff)
        .def("max_water_rate", &CwpParams::max_water_rate);

    py::class_<GtParams>(m, "GtParams")
        .def(py::init<>())
        .def_readwrite("p_max", &GtParams::p_max)
        .def_readwrite("p_min", &GtParams::p_min);

    py::class_<GbParams>(m, "GbParams")
        .def(py::init<>())
        .def_readwrite("h_max", &GbParams::h_max)
        .def_readwrite("h_min", &GbParams::h_min);

    py::class_<HstParams>(m, "HstParams")
        .def(py::init<>())
        .def_readwrite("c_w", &HstParams::c_w)
        .def_readwrite("t_min", &HstParams::t_min)
        .def_readwrite("t_max", &HstParams::t_max)
        .def_readwrite("g_min", &HstParams::g_min)
        .def_readwrite("g_max", &HstParams::g_max)
        .def_readwrite("upsilon", &HstParams::upsilon)
        .def_readwrite("length_m", &HstParams::length_m)
        .def_readwrite("t_return", &HstParams::t_return);

    py::class_<DeviceParams>(m, "DeviceParams")
        .def(py::init<>())
        .def_readwrite("chp", &DeviceParams::chp)
        .def_readwrite("cwp", &DeviceParams::cwp)
        .def_readwrite("gt", &DeviceParams::gt)
        .def_readwrite("gb", &DeviceParams::gb)
        .def_readwrite("hst", &DeviceParams::hst)
        .def("validate", &DeviceParams::validate);

    py::class_<DispatchDecision>(m, "DispatchDecision")
        .def(py::init<>())
        .def_readwrite("p_chp", &DispatchDecision::p_chp)
        .def_readwrite("h_chp", &DispatchDecision::h_chp)
        .def_readwrite("p_cwp", &DispatchDecision::p_cwp)
        .def_readwrite("w_cwp", &DispatchDecision::w_cwp)
        .def_readwrite("p_gt", &DispatchDecision::p_gt)
        .def_readwrite("h_gb", &DispatchDecision::h_gb)
        .def("__repr__", &decision_repr);

    m.def("neutral_decision", &neutral_decision, py::arg("devices"));
    m.def("project_feasible", &project_feasible, py::arg("raw"), py::arg("prev"),
          py::arg("devices"));
    m.def("box_feasible", &box_feasible, py::arg("decision"), py::arg("devices"),
          py::arg("tol") = 1e-9);
    m.def("step_feasible", &step_feasible, py::arg("decision"), py::arg("prev"),
          py::arg("devices"), py::arg("tol") = 1e-9);

    py::class_<HstAnalysis>(m, "HstAnalysis")
        .def_readonly("flow_kg_s", &HstAnalysis::flow_kg_s)
        .def_readonly("supply_temp", &HstAnalysis::supply_temp)
        .def_readonly("loss_kw", &HstAnalysis::loss_kw)
        .def_readonly("h_load_eff", &HstAnalysis::h_load_eff)
        .def_readonly("undeliverable_kw", &HstAnalysis::undeliverable_kw)
        .def_readonly("feasible", &HstAnalysis::feasible);

    m.def("analyze_hst", &analyze_hst, py::arg("h_load"), py::arg("w_cwp"),
          py::arg("t_env"), py::arg("hst"));

    // --- costs ----------------------------------------------------------------

    py::class_<CostParams>(m, "CostParams")
        .def(py::init<>())
        .def_readwrite("gas_price", &CostParams::gas_price)
        .def_readwrite("eta_chp", &CostParams::eta_chp)
        .def_readwrite("eta_cwp", &CostParams::eta_cwp)
        .def_readwrite("eta_gt", &CostParams::eta_gt)
        .def_readwrite("eta_gb", &CostParams::eta_gb)
        .def_readwrite("co2_price", &CostParams::co2_price)
        .def_readwrite("co2_per_kwh", &CostParams::co2_per_kwh);

    m.def("total_cost", &total_cost, py::arg("decision"), py::arg("costs"),
          py::arg("q_coeff"));

    // --- scenarios --------------------------------------------------------------

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("p_load", &Scenario::p_load)
        .def_readwrite("h_load", &Scenario::h_load)
        .def_readwrite("w_load", &Scenario::w_load)
        .def_readwrite("p_wt", &Scenario::p_wt)
        .def_readwrite("t_env", &Scenario::t_env)
        .def("periods", &Scenario::periods)
        .def("validate", &Scenario::validate);

    m.def("default_base_day", &default_base_day);
    m.def("load_scenario", &load_scenario, py::arg("path"), py::arg("expected_periods") = 0);
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));

    py::class_<SceneGenConfig>(m, "SceneGenConfig")
        .def(py::init<>())
        .def_readwrite("base", &SceneGenConfig::base)
        .def_readwrite("rel_noise_sigma", &SceneGenConfig::rel_noise_sigma)
        .def_readwrite("seed", &SceneGenConfig::seed)
        .def_readwrite("ar1", &SceneGenConfig::ar1);

    m.def("generate_scene",
          py::overload_cast<const SceneGenConfig&>(&generate_scene), py::arg("config"));

    py::class_<Emergency>(m, "Emergency")
        .def(py::init<>())
        .def_readwrite("period", &Emergency::period)
        .def_readwrite("delta", &Emergency::delta)
        .def_readwrite("set_to_zero", &Emergency::set_to_zero);

    py::class_<EmergencyResult>(m, "EmergencyResult")
        .def_readonly("scenario", &EmergencyResult::scenario)
        .def_readonly("clamped", &EmergencyResult::clamped);

    m.def("parse_emergency_spec", &parse_emergency_spec, py::arg("spec"));
    m.def("apply_emergency", &apply_emergency, py::arg("scenario"), py::arg("emergency"));

    // --- environment ---------------------------------------------------------------

    py::class_<RewardConfig>(m, "RewardConfig")
        .def(py::init<>())
        .def_readwrite("u_offset", &RewardConfig::u_offset)
        .def_readwrite("cost_norm", &RewardConfig::cost_norm)
        .def_readwrite("imbalance_weight", &RewardConfig::imbalance_weight)
        .def_readwrite("imbalance_norm", &RewardConfig::imbalance_norm);

    py::class_<EnvConfig>(m, "EnvConfig")
        .def(py::init<>())
        .def_readwrite("devices", &EnvConfig::devices)
        .def_readwrite("costs", &EnvConfig::costs)
        .def_readwrite("reward", &EnvConfig::reward)
        .def_readwrite("obs_norm", &EnvConfig::obs_norm)
        .def_readwrite("include_time_feature", &EnvConfig::include_time_feature);

    py::class_<EnvState>(m, "EnvState")
        .def_readonly("t", &EnvState::t)
        .def_readonly("obs", &EnvState::obs)
        .def_readonly("prev", &EnvState::prev);

    py::class_<StepInfo>(m, "StepInfo")
        .def_readonly("imbalance_d", &StepInfo::imbalance_d)
        .def_readonly("cost_total", &StepInfo::cost_total)
        .def_readonly("cost_fuel", &StepInfo::cost_fuel)
        .def_readonly("cost_carbon", &StepInfo::cost_carbon)
        .def_readonly("decision", &StepInfo::decision)
        .def_readonly("hst_feasible", &StepInfo::hst_feasible);

    py::class_<StepOutcome>(m, "StepOutcome")
        .def_readonly("next_state", &StepOutcome::next_state)
        .def_readonly("reward", &StepOutcome::reward)
        .def_readonly("done", &StepOutcome::done)
        .def_readonly("info", &StepOutcome::info);

    py::class_<PeriodLoads>(m, "PeriodLoads")
        .def(py::init<>())
        .def_readwrite("p_load", &PeriodLoads::p_load)
        .def_readwrite("h_load", &PeriodLoads::h_load)
        .def_readwrite("w_load", &PeriodLoads::w_load)
        .def_readwrite("p_wt", &PeriodLoads::p_wt)
        .def_readwrite("t_env", &PeriodLoads::t_env);

    py::class_<IesEnv>(m, "IesEnv")
        .def(py::init<EnvConfig, Scenario>(), py::arg("config"), py::arg("scenario"))
        .def("periods", &IesEnv::periods)
        .def("obs_dim", &IesEnv::obs_dim)
        .def("action_dim", &IesEnv::action_dim)
        .def("reset", &IesEnv::reset)
        .def("loads_at", &IesEnv::loads_at, py::arg("t"))
        .def(
            "decode_action",
            [](const IesEnv& env, const std::vector<double>& raw, const DispatchDecision& prev) {
                return env.decode_action(to_action(raw), prev);
            },
            py::arg("raw"), py::arg("prev"))
        .def(
            "encode_decision",
            [](const IesEnv& env, const DispatchDecision& d) {
                const auto a = env.encode_decision(d);
                return std::vector<double>(a.begin(), a.end());
            },
            py::arg("decision"))
        .def(
            "step",
            [](const IesEnv& env, const EnvState& st, const std::vector<double>& raw) {
                return env.step(st, to_action(raw));
            },
            py::arg("state"), py::arg("raw_action"));

    // --- configuration ------------------------------------------------------------

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("devices", &RunConfig::devices)
        .def_readwrite("costs", &RunConfig::costs)
        .def_readwrite("reward", &RunConfig::reward)
        .def_readwrite("ppo", &RunConfig::ppo)
        .def_readwrite("swarm", &RunConfig::swarm)
        .def_readwrite("grid", &RunConfig::grid)
        .def_readwrite("scenario_path", &RunConfig::scenario_path)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("noise_sigma", &RunConfig::noise_sigma)
        .def_readwrite("ar1", &RunConfig::ar1)
        .def_readwrite("time_feature", &RunConfig::time_feature)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def("set", &apply_kv, py::arg("key"), py::arg("value"));

    m.def("load_config", &load_config, py::arg("path"));
    m.def("resolve_scenario", &resolve_scenario, py::arg("config"));
    m.def("make_env_config", &make_env_config, py::arg("config"), py::arg("scenario"));
    m.def("make_scene_config", &make_scene_config, py::arg("config"), py::arg("base"));

    // --- policy and training --------------------------------------------------------

    py::class_<GaussianPolicy>(m, "GaussianPolicy")
        .def_readonly("log_std", &GaussianPolicy::log_std);

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("actor", &Checkpoint::actor)
        .def_readonly("critic", &Checkpoint::critic)
        .def_readonly("train_seconds", &Checkpoint::train_seconds)
        .def_readonly("episodes", &Checkpoint::episodes);

    py::class_<Mlp>(m, "Mlp")
        .def_readonly("params", &Mlp::params)
        .def("param_count", &Mlp::param_count);

    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));
    m.def("save_checkpoint", &save_checkpoint, py::arg("checkpoint"), py::arg("path"));

    m.def(
        "greedy_action",
        [](const GaussianPolicy& actor, const std::vector<double>& obs) {
            std::vector<double> a = forward(actor.mean_net, obs);
            for (double& v : a) v = std::clamp(v, -1.0, 1.0);
            return a;
        },
        py::arg("actor"), py::arg("obs"),
        "Clipped mean action for an observation, as used by greedy evaluation.");

    py::class_<Hyperparams>(m, "Hyperparams")
        .def(py::init<>())
        .def_readwrite("gamma", &Hyperparams::gamma)
        .def_readwrite("clip_eps", &Hyperparams::clip_eps)
        .def_readwrite("minibatch", &Hyperparams::minibatch)
        .def_readwrite("lr_actor", &Hyperparams::lr_actor)
        .def_readwrite("lr_critic", &Hyperparams::lr_critic)
        .def_readwrite("episodes_total", &Hyperparams::episodes_total)
        .def_readwrite("workers", &Hyperparams::workers)
        .def_readwrite("epochs_per_update", &Hyperparams::epochs_per_update)
        .def_readwrite("episodes_per_update", &Hyperparams::episodes_per_update)
        .def_readwrite("hidden_dims", &Hyperparams::hidden_dims)
        .def_readwrite("log_std_init", &Hyperparams::log_std_init)
        .def_readwrite("ma_window", &Hyperparams::ma_window);

    py::class_<TrainLogRow>(m, "TrainLogRow")
        .def_readonly("episode", &TrainLogRow::episode)
        .def_readonly("reward", &TrainLogRow::reward)
        .def_readonly("ma_reward", &TrainLogRow::ma_reward)
        .def_readonly("actor_loss", &TrainLogRow::actor_loss)
        .def_readonly("critic_loss", &TrainLogRow::critic_loss)
        .def_readonly("seconds", &TrainLogRow::seconds);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("checkpoint", &TrainResult::checkpoint)
        .def_readonly("log", &TrainResult::log)
        .def_readonly("train_seconds", &TrainResult::train_seconds);

    m.def(
        "train",
        [](const EnvConfig& env_cfg, const SceneGenConfig& scene_cfg, const Hyperparams& hp,
           std::uint64_t seed) { return train(env_cfg, scene_cfg, hp, seed); },
        py::arg("env_config"), py::arg("scene_config"), py::arg("hyperparams"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("improved", &ConvergenceReport::improved)
        .def_readonly("plateau", &ConvergenceReport::plateau)
        .def_readonly("first_decile_avg", &ConvergenceReport::first_decile_avg)
        .def_readonly("final_decile_avg", &ConvergenceReport::final_decile_avg)
        .def_readonly("final_decile_max", &ConvergenceReport::final_decile_max);

    m.def("assess_convergence", &assess_convergence, py::arg("log"),
          py::arg("ma_window") = 500);

    py::class_<EpisodeEval>(m, "EpisodeEval")
        .def_readonly("steps", &EpisodeEval::steps)
        .def_readonly("total_reward", &EpisodeEval::total_reward)
        .def_readonly("total_cost", &EpisodeEval::total_cost)
        .def_readonly("total_imbalance", &EpisodeEval::total_imbalance);

    m.def("evaluate_policy", &evaluate_policy, py::arg("env"), py::arg("actor"));

    // --- baselines ---------------------------------------------------------------------

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("n_pchp", &GridSpec::n_pchp)
        .def_readwrite("n_b", &GridSpec::n_b)
        .def_readwrite("n_pgt", &GridSpec::n_pgt)
        .def_readwrite("max_nodes", &GridSpec::max_nodes)
        .def("nodes", &GridSpec::nodes)
        .def("refined", &GridSpec::refined);

    py::class_<DpResult>(m, "DpResult")
        .def_readonly("decisions", &DpResult::decisions)
        .def_readonly("total_cost", &DpResult::total_cost)
        .def_readonly("feasible", &DpResult::feasible)
        .def_readonly("infeasible_period", &DpResult::infeasible_period)
        .def_readonly("solve_seconds", &DpResult::solve_seconds);

    m.def("dp_oracle", &dp_oracle, py::arg("scenario"), py::arg("grid"), py::arg("devices"),
          py::arg("costs"), py::call_guard<py::gil_scoped_release>());
    m.def("reduce_decision", &reduce_decision, py::arg("p_chp"), py::arg("b"),
          py::arg("p_gt"), py::arg("loads"), py::arg("devices"));

    py::class_<SwarmConfig>(m, "SwarmConfig")
        .def(py::init<>())
        .def_readwrite("population", &SwarmConfig::population)
        .def_readwrite("max_iters", &SwarmConfig::max_iters)
        .def_readwrite("runs", &SwarmConfig::runs)
        .def_readwrite("inertia", &SwarmConfig::inertia)
        .def_readwrite("cognitive", &SwarmConfig::cognitive)
        .def_readwrite("social", &SwarmConfig::social)
        .def_readwrite("spiral_b", &SwarmConfig::spiral_b)
        .def_readwrite("penalty_factor", &SwarmConfig::penalty_factor)
        .def_readwrite("seed", &SwarmConfig::seed);

    py::class_<SwarmRunStat>(m, "SwarmRunStat")
        .def_readonly("cost", &SwarmRunStat::cost)
        .def_readonly("objective", &SwarmRunStat::objective)
        .def_readonly("imbalance", &SwarmRunStat::imbalance)
        .def_readonly("seconds", &SwarmRunStat::seconds);

    py::class_<SwarmResult>(m, "SwarmResult")
        .def_readonly("best_decisions", &SwarmResult::best_decisions)
        .def_readonly("best_objective", &SwarmResult::best_objective)
        .def_readonly("best_cost", &SwarmResult::best_cost)
        .def_readonly("runs", &SwarmResult::runs)
        .def_readonly("mean_cost", &SwarmResult::mean_cost)
        .def_readonly("mean_objective", &SwarmResult::mean_objective)
        .def_readonly("mean_seconds", &SwarmResult::mean_seconds);

    m.def("pso_dispatch", &pso_dispatch, py::arg("env"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("woa_dispatch", &woa_dispatch, py::arg("env"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
