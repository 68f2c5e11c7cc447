#include "ies/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ies/errors.hpp"

namespace ies {

namespace {

double clip01_symmetric(double v) { return std::clamp(v, -1.0, 1.0); }

double affine_up(double a, double lo, double hi) {
    return lo + 0.5 * (a + 1.0) * (hi - lo);
}

double affine_down(double x, double lo, double hi) {
    if (hi <= lo) return 0.0;
    return std::clamp(2.0 * (x - lo) / (hi - lo) - 1.0, -1.0, 1.0);
}

}  // namespace

PeriodLoads slice(const Scenario& s, std::size_t t) {
    if (t >= s.periods()) throw std::out_of_range("period index past scenario end");
    return PeriodLoads{s.p_load[t], s.h_load[t], s.w_load[t], s.p_wt[t], s.t_env[t]};
}

HstAnalysis analyze_hst(double h_load, double w_cwp, double t_env, const HstParams& hst) {
    HstAnalysis a;
    a.flow_kg_s = w_cwp * 1000.0 / 3600.0;
    const double g = a.flow_kg_s;
    // loss coefficient per degC of pipe-ambient gap [kW/degC]
    const double k = 2.0 * std::numbers::pi * hst.length_m / (hst.upsilon * 1000.0);

    if (g <= 0.0) {
        a.supply_temp = hst.t_min;
        a.loss_kw = 0.0;
        a.h_load_eff = h_load;
        a.undeliverable_kw = h_load;
        a.feasible = h_load <= 0.0 && hst.g_min <= 0.0;
        return a;
    }

    const double cg = hst.c_w * g;
    auto delivered_at = [&](double t_sw) {
        return hst_carried_heat(g, t_sw, hst.t_return, hst.c_w) -
               hst_heat_loss(t_sw, t_env, hst.upsilon, hst.length_m);
    };

    double t_required;
    if (cg > k) {
        t_required = (h_load + cg * hst.t_return - k * t_env) / (cg - k);
    } else {
        // Loss grows faster than carriage: delivery peaks at the band's low end.
        t_required = delivered_at(hst.t_min) >= h_load ? hst.t_min : hst.t_max + 1.0;
    }

    a.supply_temp = std::clamp(t_required, hst.t_min, hst.t_max);
    a.loss_kw = hst_heat_loss(a.supply_temp, t_env, hst.upsilon, hst.length_m);
    a.h_load_eff = h_load + a.loss_kw;
    a.undeliverable_kw = std::max(0.0, h_load - std::max(0.0, delivered_at(hst.t_max)));

    const bool flow_ok = g >= hst.g_min && g <= hst.g_max;
    a.feasible = flow_ok && t_required <= hst.t_max + 1e-9;
    return a;
}

void RewardConfig::validate() const {
    if (!(cost_norm > 0.0)) throw ConfigError("reward.cost_norm must be > 0");
    if (!(imbalance_norm > 0.0)) throw ConfigError("reward.imbalance_norm must be > 0");
    if (u_offset < 0.0) throw ConfigError("reward.u_offset must be >= 0");
    if (imbalance_weight < 0.0) throw ConfigError("reward.imbalance_weight must be >= 0");
}

double imbalance(const DispatchDecision& d, const PeriodLoads& loads,
                 const DeviceParams& devices) {
    const HstAnalysis hst = analyze_hst(loads.h_load, d.w_cwp, loads.t_env, devices.hst);
    const double elec = d.p_chp + d.p_cwp + d.p_gt + loads.p_wt - loads.p_load;
    const double heat = d.h_chp + d.h_gb - hst.h_load_eff;
    const double water = d.w_cwp - loads.w_load;
    return std::abs(elec) + std::abs(heat) + devices.cwp.q_coeff * std::abs(water) +
           hst.undeliverable_kw;
}

double reward(const DispatchDecision& d, const PeriodLoads& loads,
              const DeviceParams& devices, const CostParams& costs,
              const RewardConfig& rc) {
    const double cost = total_cost(d, costs, devices.cwp.q_coeff);
    const double imb = imbalance(d, loads, devices);
    return -cost / rc.cost_norm - rc.imbalance_weight * imb / rc.imbalance_norm + rc.u_offset;
}

double max_period_cost(const DeviceParams& devices, const CostParams& costs) {
    DispatchDecision top;
    top.p_chp = devices.chp.p_max;
    top.h_chp = devices.chp.b_max * devices.chp.p_max;
    top.p_cwp = devices.cwp.p_tp_max;
    top.w_cwp = 0.0;
    top.p_gt = devices.gt.p_max;
    top.h_gb = devices.gb.h_max;
    return total_cost(top, costs, devices.cwp.q_coeff);
}

double peak_total_load(const Scenario& s, double q_coeff) {
    double peak = 0.0;
    for (std::size_t t = 0; t < s.periods(); ++t) {
        peak = std::max(peak, s.p_load[t] + s.h_load[t] + q_coeff * s.w_load[t]);
    }
    return peak;
}

void EnvConfig::validate() const {
    devices.validate();
    costs.validate();
    reward.validate();
    for (double n : obs_norm) {
        if (!(n > 0.0)) throw ConfigError("env.obs_norm entries must be > 0");
    }
}

IesEnv::IesEnv(EnvConfig config, Scenario scenario)
    : cfg_(std::move(config)), scenario_(std::move(scenario)) {
    cfg_.validate();
    scenario_.validate();
    neutral_ = neutral_decision(cfg_.devices);
}

void IesEnv::set_scenario(Scenario scenario) {
    scenario.validate();
    scenario_ = std::move(scenario);
}

std::vector<double> IesEnv::observe(std::size_t t) const {
    std::vector<double> obs(obs_dim(), 0.0);
    if (t < periods()) {
        obs[0] = scenario_.p_load[t] / cfg_.obs_norm[0];
        obs[1] = scenario_.h_load[t] / cfg_.obs_norm[1];
        obs[2] = scenario_.w_load[t] / cfg_.obs_norm[2];
        obs[3] = scenario_.p_wt[t] / cfg_.obs_norm[3];
        if (cfg_.include_time_feature) {
            obs[4] = static_cast<double>(t) / static_cast<double>(periods());
        }
    }
    return obs;
}

EnvState IesEnv::reset() const {
    return EnvState{0, observe(0), neutral_};
}

DispatchDecision IesEnv::decode_action(const std::array<double, 6>& raw,
                                       const DispatchDecision& prev) const {
    const DeviceParams& dp = cfg_.devices;
    const double a0 = clip01_symmetric(raw[0]);
    const double a1 = clip01_symmetric(raw[1]);
    const double a2 = clip01_symmetric(raw[2]);
    const double a3 = clip01_symmetric(raw[3]);
    const double a4 = clip01_symmetric(raw[4]);
    const double a5 = clip01_symmetric(raw[5]);

    DispatchDecision d;
    d.p_chp = affine_up(a0, dp.chp.p_min, dp.chp.p_max);
    const double b = affine_up(a1, dp.chp.b_min, dp.chp.b_max);
    d.h_chp = chp_heat_from_ratio(d.p_chp, b);
    const double p_tp = affine_up(a2, dp.cwp.p_tp_min, dp.cwp.p_tp_max);
    d.w_cwp = affine_up(a3, 0.0, dp.cwp.max_water_rate());
    d.p_cwp = p_tp - ro_power(dp.cwp.q_coeff, d.w_cwp);
    d.p_gt = affine_up(a4, dp.gt.p_min, dp.gt.p_max);
    d.h_gb = affine_up(a5, dp.gb.h_min, dp.gb.h_max);
    return project_feasible(d, prev, dp);
}

std::array<double, 6> IesEnv::encode_decision(const DispatchDecision& d) const {
    const DeviceParams& dp = cfg_.devices;
    const double b = d.p_chp > 0.0 ? d.h_chp / d.p_chp : dp.chp.b_min;
    return {affine_down(d.p_chp, dp.chp.p_min, dp.chp.p_max),
            affine_down(b, dp.chp.b_min, dp.chp.b_max),
            affine_down(d.thermal_power(dp.cwp.q_coeff), dp.cwp.p_tp_min, dp.cwp.p_tp_max),
            affine_down(d.w_cwp, 0.0, dp.cwp.max_water_rate()),
            affine_down(d.p_gt, dp.gt.p_min, dp.gt.p_max),
            affine_down(d.h_gb, dp.gb.h_min, dp.gb.h_max)};
}

StepOutcome IesEnv::step(const EnvState& state, const std::array<double, 6>& raw_action) const {
    if (state.t >= periods()) {
        throw std::logic_error("step called on a finished episode");
    }
    const PeriodLoads loads = loads_at(state.t);
    const DispatchDecision d = decode_action(raw_action, state.prev);

    StepOutcome out;
    out.info.decision = d;
    const Calorifics cal = calorific_values(d, cfg_.costs, cfg_.devices.cwp.q_coeff);
    out.info.cost_fuel = cfg_.costs.gas_price * cal.total();
    out.info.cost_carbon = carbon_cost(cal, cfg_.costs);
    out.info.cost_total = out.info.cost_fuel + out.info.cost_carbon;
    out.info.imbalance_d = imbalance(d, loads, cfg_.devices);
    out.info.hst_feasible =
        analyze_hst(loads.h_load, d.w_cwp, loads.t_env, cfg_.devices.hst).feasible;

    out.reward = -out.info.cost_total / cfg_.reward.cost_norm -
                 cfg_.reward.imbalance_weight * out.info.imbalance_d / cfg_.reward.imbalance_norm +
                 cfg_.reward.u_offset;

    out.next_state.t = state.t + 1;
    out.next_state.obs = observe(state.t + 1);
    out.next_state.prev = d;
    out.done = out.next_state.t == periods();
    return out;
}

}  // namespace ies
