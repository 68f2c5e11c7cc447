#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ies/env.hpp"

namespace ies {

/// Discretization of the reduced per-period decision space (p_chp, b, p_gt).
/// The remaining outputs follow from the balance equalities.
struct GridSpec {
    std::size_t n_pchp = 21;
    std::size_t n_b = 15;
    std::size_t n_pgt = 16;
    std::size_t max_nodes = 2'000'000;  ///< per-period grid budget

    std::size_t nodes() const { return n_pchp * n_b * n_pgt; }
    /// Doubled resolution (2n - 1 keeps every existing grid point).
    GridSpec refined() const { return {2 * n_pchp - 1, 2 * n_b - 1, 2 * n_pgt - 1, max_nodes}; }
    void validate() const;
};

/// Completes (p_chp, b, p_gt) into a full balanced decision: water output
/// matches the water load, the boiler covers the remaining effective heat
/// load, and the CWP covers the remaining electric load. Returns nothing
/// when any device limit or balance sign constraint is violated.
std::optional<DispatchDecision> reduce_decision(double p_chp, double b, double p_gt,
                                                const PeriodLoads& loads,
                                                const DeviceParams& devices);

struct DpResult {
    std::vector<DispatchDecision> decisions;
    double total_cost = 0.0;
    bool feasible = false;
    std::size_t infeasible_period = 0;  ///< 0-based; valid when !feasible
    double solve_seconds = 0.0;
};

/// Exact minimum-cost grid dispatch under ramp coupling, by forward dynamic
/// programming over (p_chp, p_gt) grid states with a per-state minimization
/// over b. Period 0 ramps against the neutral mid-range decision, matching
/// the environment's episode start.
DpResult dp_oracle(const Scenario& scenario, const GridSpec& grid, const DeviceParams& devices,
                   const CostParams& costs);

struct SwarmConfig {
    std::size_t population = 100;
    std::size_t max_iters = 600;
    std::size_t runs = 20;
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;
    double spiral_b = 1.0;
    /// Imbalance penalty: penalty_factor * cost_norm per unit of D/imbalance_norm.
    double penalty_factor = 10.0;
    std::uint64_t seed = 0;
    void validate() const;
};

struct SwarmRunStat {
    double cost = 0.0;       ///< fuel + carbon of the run's best candidate
    double objective = 0.0;  ///< cost plus imbalance penalty
    double imbalance = 0.0;  ///< summed D of the run's best candidate
    double seconds = 0.0;
};

struct SwarmResult {
    std::vector<DispatchDecision> best_decisions;  ///< best run's best candidate
    double best_objective = 0.0;
    double best_cost = 0.0;
    std::vector<SwarmRunStat> runs;
    double mean_cost = 0.0;
    double mean_objective = 0.0;
    double mean_seconds = 0.0;
};

double swarm_penalty_weight(const RewardConfig& rc, double penalty_factor);

/// Whole-day objective of a flat candidate in the action cube [-1,1]^(T*6):
/// sum over periods of cost + penalty_weight * D after decode/projection.
double swarm_objective(const IesEnv& env, const std::vector<double>& x, double penalty_weight,
                       double* cost_out = nullptr, double* imbalance_out = nullptr,
                       std::vector<DispatchDecision>* decisions_out = nullptr);

/// Particle swarm over the whole-day action encoding; cfg.runs independent
/// seeded runs (run r draws from seed + r), reduced in run order.
SwarmResult pso_dispatch(const IesEnv& env, const SwarmConfig& cfg);

/// Whale optimization with encircling, spiral, and random-search moves.
SwarmResult woa_dispatch(const IesEnv& env, const SwarmConfig& cfg);

}  // namespace ies
