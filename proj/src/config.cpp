#include "ies/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>

#include "ies/errors.hpp"
#include "ies/util.hpp"

namespace ies {

namespace {

std::size_t to_count(const std::string& v, const std::string& key) {
    const long n = parse_long(v);
    if (n < 0) throw ConfigError("config key '" + key + "' must be >= 0");
    return static_cast<std::size_t>(n);
}

std::uint64_t to_seed(const std::string& v) {
    const long n = parse_long(v);
    if (n < 0) throw ConfigError("seeds must be >= 0");
    return static_cast<std::uint64_t>(n);
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "' expects true/false");
}

std::vector<std::size_t> to_dims(const std::string& v) {
    std::vector<std::size_t> dims;
    for (const std::string& part : split(v, ',')) {
        const long n = parse_long(part);
        if (n <= 0) throw ConfigError("hidden layer sizes must be positive");
        dims.push_back(static_cast<std::size_t>(n));
    }
    return dims;
}

}  // namespace

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(RunConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"device.chp.p_max", [](RunConfig& c, const std::string& v) { c.devices.chp.p_max = parse_double(v); }},
        {"device.chp.p_min", [](RunConfig& c, const std::string& v) { c.devices.chp.p_min = parse_double(v); }},
        {"device.chp.b_min", [](RunConfig& c, const std::string& v) { c.devices.chp.b_min = parse_double(v); }},
        {"device.chp.b_max", [](RunConfig& c, const std::string& v) { c.devices.chp.b_max = parse_double(v); }},
        {"device.chp.ramp_max", [](RunConfig& c, const std::string& v) { c.devices.chp.ramp_max = parse_double(v); }},
        {"device.cwp.p_tp_max", [](RunConfig& c, const std::string& v) { c.devices.cwp.p_tp_max = parse_double(v); }},
        {"device.cwp.p_tp_min", [](RunConfig& c, const std::string& v) { c.devices.cwp.p_tp_min = parse_double(v); }},
        {"device.cwp.ramp_tp_max", [](RunConfig& c, const std::string& v) { c.devices.cwp.ramp_tp_max = parse_double(v); }},
        {"device.cwp.q_coeff", [](RunConfig& c, const std::string& v) { c.devices.cwp.q_coeff = parse_double(v); }},
        {"device.cwp.v_t0", [](RunConfig& c, const std::string& v) { c.devices.cwp.v_t0 = parse_double(v); }},
        {"device.cwp.temp_coeff", [](RunConfig& c, const std::string& v) { c.devices.cwp.temp_coeff = parse_double(v); }},
        {"device.cwp.pressure_coeff", [](RunConfig& c, const std::string& v) { c.devices.cwp.pressure_coeff = parse_double(v); }},
        {"device.cwp.seawater_conc", [](RunConfig& c, const std::string& v) { c.devices.cwp.seawater_conc = parse_double(v); }},
        {"device.cwp.recovery_rate", [](RunConfig& c, const std::string& v) { c.devices.cwp.recovery_rate = parse_double(v); }},
        {"device.gt.p_max", [](RunConfig& c, const std::string& v) { c.devices.gt.p_max = parse_double(v); }},
        {"device.gt.p_min", [](RunConfig& c, const std::string& v) { c.devices.gt.p_min = parse_double(v); }},
        {"device.gb.h_max", [](RunConfig& c, const std::string& v) { c.devices.gb.h_max = parse_double(v); }},
        {"device.gb.h_min", [](RunConfig& c, const std::string& v) { c.devices.gb.h_min = parse_double(v); }},
        {"hst.c_w", [](RunConfig& c, const std::string& v) { c.devices.hst.c_w = parse_double(v); }},
        {"hst.t_min", [](RunConfig& c, const std::string& v) { c.devices.hst.t_min = parse_double(v); }},
        {"hst.t_max", [](RunConfig& c, const std::string& v) { c.devices.hst.t_max = parse_double(v); }},
        {"hst.g_min", [](RunConfig& c, const std::string& v) { c.devices.hst.g_min = parse_double(v); }},
        {"hst.g_max", [](RunConfig& c, const std::string& v) { c.devices.hst.g_max = parse_double(v); }},
        {"hst.upsilon", [](RunConfig& c, const std::string& v) { c.devices.hst.upsilon = parse_double(v); }},
        {"hst.length_m", [](RunConfig& c, const std::string& v) { c.devices.hst.length_m = parse_double(v); }},
        {"hst.t_return", [](RunConfig& c, const std::string& v) { c.devices.hst.t_return = parse_double(v); }},
        {"cost.gas_price", [](RunConfig& c, const std::string& v) { c.costs.gas_price = parse_double(v); }},
        {"cost.eta_chp", [](RunConfig& c, const std::string& v) { c.costs.eta_chp = parse_double(v); }},
        {"cost.eta_cwp", [](RunConfig& c, const std::string& v) { c.costs.eta_cwp = parse_double(v); }},
        {"cost.eta_gt", [](RunConfig& c, const std::string& v) { c.costs.eta_gt = parse_double(v); }},
        {"cost.eta_gb", [](RunConfig& c, const std::string& v) { c.costs.eta_gb = parse_double(v); }},
        {"cost.co2_price", [](RunConfig& c, const std::string& v) { c.costs.co2_price = parse_double(v); }},
        {"cost.co2_per_kwh", [](RunConfig& c, const std::string& v) { c.costs.co2_per_kwh = parse_double(v); }},
        {"reward.u_offset", [](RunConfig& c, const std::string& v) { c.reward.u_offset = parse_double(v); }},
        {"reward.cost_norm", [](RunConfig& c, const std::string& v) { c.reward.cost_norm = parse_double(v); }},
        {"reward.imbalance_weight", [](RunConfig& c, const std::string& v) { c.reward.imbalance_weight = parse_double(v); }},
        {"reward.imbalance_norm", [](RunConfig& c, const std::string& v) { c.reward.imbalance_norm = parse_double(v); }},
        {"ppo.gamma", [](RunConfig& c, const std::string& v) { c.ppo.gamma = parse_double(v); }},
        {"ppo.clip_eps", [](RunConfig& c, const std::string& v) { c.ppo.clip_eps = parse_double(v); }},
        {"ppo.minibatch", [](RunConfig& c, const std::string& v) { c.ppo.minibatch = to_count(v, "ppo.minibatch"); }},
        {"ppo.lr_actor", [](RunConfig& c, const std::string& v) { c.ppo.lr_actor = parse_double(v); }},
        {"ppo.lr_critic", [](RunConfig& c, const std::string& v) { c.ppo.lr_critic = parse_double(v); }},
        {"ppo.episodes", [](RunConfig& c, const std::string& v) { c.ppo.episodes_total = to_count(v, "ppo.episodes"); }},
        {"ppo.workers", [](RunConfig& c, const std::string& v) { c.ppo.workers = to_count(v, "ppo.workers"); }},
        {"ppo.epochs_per_update", [](RunConfig& c, const std::string& v) { c.ppo.epochs_per_update = to_count(v, "ppo.epochs_per_update"); }},
        {"ppo.episodes_per_update", [](RunConfig& c, const std::string& v) { c.ppo.episodes_per_update = to_count(v, "ppo.episodes_per_update"); }},
        {"ppo.hidden_dims", [](RunConfig& c, const std::string& v) { c.ppo.hidden_dims = to_dims(v); }},
        {"ppo.log_std_init", [](RunConfig& c, const std::string& v) { c.ppo.log_std_init = parse_double(v); }},
        {"ppo.ma_window", [](RunConfig& c, const std::string& v) { c.ppo.ma_window = to_count(v, "ppo.ma_window"); }},
        {"swarm.population", [](RunConfig& c, const std::string& v) { c.swarm.population = to_count(v, "swarm.population"); }},
        {"swarm.max_iters", [](RunConfig& c, const std::string& v) { c.swarm.max_iters = to_count(v, "swarm.max_iters"); }},
        {"swarm.runs", [](RunConfig& c, const std::string& v) { c.swarm.runs = to_count(v, "swarm.runs"); }},
        {"swarm.inertia", [](RunConfig& c, const std::string& v) { c.swarm.inertia = parse_double(v); }},
        {"swarm.cognitive", [](RunConfig& c, const std::string& v) { c.swarm.cognitive = parse_double(v); }},
        {"swarm.social", [](RunConfig& c, const std::string& v) { c.swarm.social = parse_double(v); }},
        {"swarm.spiral_b", [](RunConfig& c, const std::string& v) { c.swarm.spiral_b = parse_double(v); }},
        {"swarm.penalty_factor", [](RunConfig& c, const std::string& v) { c.swarm.penalty_factor = parse_double(v); }},
        {"swarm.seed", [](RunConfig& c, const std::string& v) { c.swarm_seed = to_seed(v); }},
        {"oracle.n_pchp", [](RunConfig& c, const std::string& v) { c.grid.n_pchp = to_count(v, "oracle.n_pchp"); }},
        {"oracle.n_b", [](RunConfig& c, const std::string& v) { c.grid.n_b = to_count(v, "oracle.n_b"); }},
        {"oracle.n_pgt", [](RunConfig& c, const std::string& v) { c.grid.n_pgt = to_count(v, "oracle.n_pgt"); }},
        {"scenario.path", [](RunConfig& c, const std::string& v) { c.scenario_path = v; }},
        {"scenario.seed", [](RunConfig& c, const std::string& v) { c.seed = to_seed(v); }},
        {"scenario.ar1", [](RunConfig& c, const std::string& v) { c.ar1 = parse_double(v); }},
        {"scenario.noise_p_load", [](RunConfig& c, const std::string& v) { c.noise_sigma[0] = parse_double(v); }},
        {"scenario.noise_h_load", [](RunConfig& c, const std::string& v) { c.noise_sigma[1] = parse_double(v); }},
        {"scenario.noise_w_load", [](RunConfig& c, const std::string& v) { c.noise_sigma[2] = parse_double(v); }},
        {"scenario.noise_p_wt", [](RunConfig& c, const std::string& v) { c.noise_sigma[3] = parse_double(v); }},
        {"env.time_feature", [](RunConfig& c, const std::string& v) { c.time_feature = to_bool(v, "env.time_feature"); }},
        {"out.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
    };

    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
        it->second(cfg, value);
    } catch (const ConfigError& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string head = line.substr(0, line.find('#'));
        const std::string_view stripped = trim(head);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key{trim(stripped.substr(0, eq))};
        const std::string value{trim(stripped.substr(eq + 1))};
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        try {
            apply_kv(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

Scenario resolve_scenario(const RunConfig& cfg) {
    if (cfg.scenario_path.empty()) return default_base_day();
    return load_scenario(cfg.scenario_path);
}

EnvConfig make_env_config(const RunConfig& cfg, const Scenario& scenario) {
    EnvConfig env;
    env.devices = cfg.devices;
    env.costs = cfg.costs;
    env.reward = cfg.reward;
    env.include_time_feature = cfg.time_feature;
    if (env.reward.cost_norm <= 0.0) {
        env.reward.cost_norm = max_period_cost(cfg.devices, cfg.costs);
    }
    if (env.reward.imbalance_norm <= 0.0) {
        env.reward.imbalance_norm = peak_total_load(scenario, cfg.devices.cwp.q_coeff);
    }
    const auto peak = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m > 0.0 ? m : 1.0;
    };
    env.obs_norm = {peak(scenario.p_load), peak(scenario.h_load), peak(scenario.w_load),
                    peak(scenario.p_wt)};
    env.validate();
    return env;
}

SceneGenConfig make_scene_config(const RunConfig& cfg, Scenario base) {
    SceneGenConfig sg;
    sg.base = std::move(base);
    sg.rel_noise_sigma = cfg.noise_sigma;
    sg.seed = cfg.seed;
    sg.ar1 = cfg.ar1;
    sg.validate();
    return sg;
}

std::uint64_t swarm_seed(const RunConfig& cfg) {
    return cfg.swarm_seed.value_or(cfg.seed);
}

}  // namespace ies
