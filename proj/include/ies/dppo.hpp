#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ies/env.hpp"
#include "ies/neuralnet.hpp"
#include "ies/scenario.hpp"

namespace ies {

/// One environment step as seen by the learner.
struct Transition {
    std::vector<double> obs;
    std::array<double, kActionDim> action{};  ///< pre-clip policy sample
    double log_prob = 0.0;                    ///< density of that sample
    double reward = 0.0;
    bool done = false;
    double value = 0.0;  ///< critic estimate at collection time
};

struct Hyperparams {
    double gamma = 0.95;
    double clip_eps = 0.2;
    std::size_t minibatch = 128;
    double lr_actor = 5e-5;
    double lr_critic = 2e-4;
    std::size_t episodes_total = 20000;
    std::size_t workers = 4;
    std::size_t epochs_per_update = 10;
    /// Episodes collected per update round; 0 means one per worker.
    std::size_t episodes_per_update = 0;
    std::vector<std::size_t> hidden_dims = {300, 100};
    double log_std_init = -2.0;
    std::size_t ma_window = 100;

    std::size_t effective_episodes_per_update() const {
        return episodes_per_update == 0 ? workers : episodes_per_update;
    }
    void validate() const;
};

struct TrainLogRow {
    std::size_t episode = 0;  ///< 1-based cumulative episode number
    double reward = 0.0;
    double ma_reward = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    double seconds = 0.0;
};

struct TrainCallbacks {
    std::function<void(const TrainLogRow&)> on_episode;
};

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<TrainLogRow> log;
    double train_seconds = 0.0;
};

/// Discounted suffix sums: R_t = r_t + gamma * R_{t+1}, R_T = r_T.
std::vector<double> compute_returns(const std::vector<double>& rewards, double gamma);

/// Elementwise returns minus value estimates.
std::vector<double> raw_advantages(const std::vector<double>& returns,
                                   const std::vector<double>& values);

/// Shifts to zero mean and scales to unit std (with an epsilon guard).
void normalize_advantages(std::vector<double>& adv);

/// exp(new - old) with the exponent clamped to avoid overflow.
double ppo_ratio(double new_log_prob, double old_log_prob);

/// Clipped surrogate: -mean(min(r*A, clamp(r, 1-eps, 1+eps)*A)).
double actor_loss(const std::vector<double>& ratios, const std::vector<double>& advantages,
                  double clip_eps);

/// Mean squared error of value estimates against returns.
double critic_loss(const std::vector<double>& values, const std::vector<double>& returns);

/// Synchronous parallel training: each round the workers roll out full
/// episodes on freshly drawn scenes under a shared policy snapshot, then the
/// learner updates actor and critic from the pooled batch. Deterministic for
/// a fixed (seed, workers): worker k draws from seed + k, the learner's
/// shuffler from seed + workers + 1, and trajectories are consumed in worker
/// order.
TrainResult train(const EnvConfig& env_cfg, const SceneGenConfig& scene_cfg,
                  const Hyperparams& hp, std::uint64_t seed,
                  const TrainCallbacks& callbacks = {});

/// Reward-trend summary over a finished log: moving-average reward compared
/// between the first and final deciles, plus a plateau check (final-decile
/// average within 15% of its own maximum).
struct ConvergenceReport {
    bool improved = false;
    bool plateau = false;
    double first_decile_avg = 0.0;
    double final_decile_avg = 0.0;
    double final_decile_max = 0.0;
};

ConvergenceReport assess_convergence(const std::vector<TrainLogRow>& log,
                                     std::size_t ma_window = 500);

/// Greedy rollout of the mean action over the environment's own scenario.
struct EpisodeEval {
    std::vector<StepInfo> steps;
    double total_reward = 0.0;
    double total_cost = 0.0;
    double total_imbalance = 0.0;
};

EpisodeEval evaluate_policy(const IesEnv& env, const GaussianPolicy& actor);

}  // namespace ies
