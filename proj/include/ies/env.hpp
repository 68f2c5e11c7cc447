#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ies/costs.hpp"
#include "ies/devices.hpp"
#include "ies/scenario.hpp"

namespace ies {

/// One period's exogenous values.
struct PeriodLoads {
    double p_load = 0.0;
    double h_load = 0.0;
    double w_load = 0.0;
    double p_wt = 0.0;
    double t_env = 0.0;
};

PeriodLoads slice(const Scenario& s, std::size_t t);

/// Pipeline operating point implied by a heat demand and the freshwater
/// throughput that sets the pipe mass flow.
struct HstAnalysis {
    double flow_kg_s = 0.0;       ///< pipe mass flow from delivered water
    double supply_temp = 0.0;     ///< supply temperature, clamped to the band
    double loss_kw = 0.0;         ///< transmission loss at that temperature
    double h_load_eff = 0.0;      ///< heat load plus transmission loss
    double undeliverable_kw = 0.0;///< heat demand beyond the pipe's capacity
    bool feasible = true;         ///< temperature and flow bands respected
};

/// Solves the supply temperature so that carried heat minus loss equals the
/// heat load, then clamps to [t_min, t_max]. Flow is w_cwp converted to kg/s.
/// Zero flow delivers nothing: the whole heat load is undeliverable.
HstAnalysis analyze_hst(double h_load, double w_cwp, double t_env, const HstParams& hst);

/// Reward shaping: r = -cost/cost_norm - weight * D / imbalance_norm + u_offset.
struct RewardConfig {
    double u_offset = 2.0;
    double cost_norm = 1.0;
    double imbalance_weight = 10.0;
    double imbalance_norm = 1.0;
    void validate() const;
};

/// Sum of absolute electric, heat, and Q-weighted water mismatches [kW].
/// The heat target includes pipe losses and any undeliverable heat.
double imbalance(const DispatchDecision& d, const PeriodLoads& loads,
                 const DeviceParams& devices);

double reward(const DispatchDecision& d, const PeriodLoads& loads,
              const DeviceParams& devices, const CostParams& costs,
              const RewardConfig& rc);

/// Largest one-period total cost: every device at its upper bound.
double max_period_cost(const DeviceParams& devices, const CostParams& costs);

/// Peak combined load: max over t of p_load + h_load + Q * w_load.
double peak_total_load(const Scenario& s, double q_coeff);

struct EnvConfig {
    DeviceParams devices;
    CostParams costs;
    RewardConfig reward;
    /// Observation divisors for [p_load, h_load, w_load, p_wt].
    std::array<double, 4> obs_norm = {1.0, 1.0, 1.0, 1.0};
    /// Appends t/periods to the observation when set.
    bool include_time_feature = false;
    void validate() const;
};

struct EnvState {
    std::size_t t = 0;
    std::vector<double> obs;
    DispatchDecision prev;
};

struct StepInfo {
    double imbalance_d = 0.0;
    double cost_total = 0.0;
    double cost_fuel = 0.0;
    double cost_carbon = 0.0;
    DispatchDecision decision;
    bool hst_feasible = true;
};

struct StepOutcome {
    EnvState next_state;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

/// Episodic dispatch environment over one scenario. Stepping is a pure
/// function of (state, action, scenario): instances hold no mutable cursor,
/// so one instance per rollout worker with no shared state.
class IesEnv {
  public:
    IesEnv(EnvConfig config, Scenario scenario);

    const EnvConfig& config() const { return cfg_; }
    const Scenario& scenario() const { return scenario_; }
    void set_scenario(Scenario scenario);

    std::size_t periods() const { return scenario_.periods(); }
    std::size_t obs_dim() const { return cfg_.include_time_feature ? 5 : 4; }
    std::size_t action_dim() const { return 6; }

    EnvState reset() const;

    /// Affine map of the clipped action cube onto the device boxes, then
    /// projection against prev. Always returns a feasible decision.
    DispatchDecision decode_action(const std::array<double, 6>& raw,
                                   const DispatchDecision& prev) const;

    /// Inverse of decode_action for decisions inside the device boxes.
    std::array<double, 6> encode_decision(const DispatchDecision& d) const;

    StepOutcome step(const EnvState& state, const std::array<double, 6>& raw_action) const;

    PeriodLoads loads_at(std::size_t t) const { return slice(scenario_, t); }

  private:
    std::vector<double> observe(std::size_t t) const;

    EnvConfig cfg_;
    Scenario scenario_;
    DispatchDecision neutral_;
};

}  // namespace ies
