#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ies/baselines.hpp"
#include "ies/dppo.hpp"
#include "ies/env.hpp"
#include "ies/scenario.hpp"

namespace ies {

/// Aggregated run configuration, loadable from a flat `key = value` file.
/// Keys are namespaced: device.*, cost.*, hst.*, reward.*, ppo.*, swarm.*,
/// oracle.*, scenario.*, env.*, out.*.
struct RunConfig {
    DeviceParams devices;
    CostParams costs;
    RewardConfig reward;  ///< cost_norm/imbalance_norm of 0 mean "derive"
    Hyperparams ppo;
    SwarmConfig swarm;
    GridSpec grid;

    std::string scenario_path;  ///< empty: use the built-in base day
    std::uint64_t seed = 0;     ///< master seed (training, scene generation)
    std::optional<std::uint64_t> swarm_seed;  ///< defaults to the master seed
    std::array<double, 4> noise_sigma = {0.05, 0.05, 0.05, 0.30};
    double ar1 = 0.0;
    bool time_feature = true;
    std::string out_dir = "out";

    RunConfig() {
        // File-driven runs derive the normalizers from devices and scenario.
        reward.cost_norm = 0.0;
        reward.imbalance_norm = 0.0;
    }
};

/// Applies one key/value pair; unknown keys and unparsable values throw.
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses a flat config file: `key = value` lines, '#' comments, blank lines.
RunConfig load_config(const std::string& path);

/// The scenario named by the config, or the built-in day when none is named.
Scenario resolve_scenario(const RunConfig& cfg);

/// Environment wiring with derived normalizers: observation divisors from the
/// scenario peaks, cost_norm from the all-devices-at-maximum decision, and
/// imbalance_norm from the peak combined load (unless set explicitly).
EnvConfig make_env_config(const RunConfig& cfg, const Scenario& scenario);

SceneGenConfig make_scene_config(const RunConfig& cfg, Scenario base);

std::uint64_t swarm_seed(const RunConfig& cfg);

}  // namespace ies
