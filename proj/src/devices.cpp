#include "ies/devices.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ies/errors.hpp"

namespace ies {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(name) + " must be finite");
}

double clamp_interval(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

}  // namespace

void CwpParams::validate() const {
    require(p_tp_min >= 0.0 && p_tp_min < p_tp_max, "cwp: need 0 <= p_tp_min < p_tp_max");
    require(q_coeff > 0.0, "cwp: q_coeff must be positive");
    require(ramp_tp_max > 0.0, "cwp: ramp_tp_max must be positive");
    require(v_t0 > 0.0, "cwp: v_t0 must be positive");
}

void ChpParams::validate() const {
    require(p_min >= 0.0 && p_min < p_max, "chp: need 0 <= p_min < p_max");
    require(b_min >= 0.0 && b_min < b_max, "chp: need 0 <= b_min < b_max");
    require(ramp_max > 0.0, "chp: ramp_max must be positive");
}

void GtParams::validate() const {
    require(p_min >= 0.0 && p_min <= p_max, "gt: need 0 <= p_min <= p_max");
}

void GbParams::validate() const {
    require(h_min >= 0.0 && h_min <= h_max, "gb: need 0 <= h_min <= h_max");
}

void HstParams::validate() const {
    require(t_min < t_max, "hst: need t_min < t_max");
    require(g_min >= 0.0 && g_min < g_max, "hst: need 0 <= g_min < g_max");
    require(upsilon > 0.0, "hst: upsilon must be positive");
    require(length_m >= 0.0, "hst: length_m must be nonnegative");
    require(c_w > 0.0, "hst: c_w must be positive");
}

void DeviceParams::validate() const {
    chp.validate();
    cwp.validate();
    gt.validate();
    gb.validate();
    hst.validate();
}

double permeation_rate(double v_t0, double delta_t, double a) {
    require_finite(v_t0, "v_t0");
    require_finite(delta_t, "delta_t");
    require_finite(a, "a");
    if (v_t0 <= 0.0) throw std::domain_error("permeation_rate: v_t0 must be positive");
    return v_t0 * (1.0 + delta_t * a);
}

double ro_power(double q_coeff, double w_cwp) {
    require_finite(w_cwp, "w_cwp");
    if (w_cwp < 0.0) throw std::domain_error("ro_power: w_cwp must be nonnegative");
    return q_coeff * w_cwp;
}

double cwp_net_power(double p_tp, double p_ro) {
    require_finite(p_tp, "p_tp");
    if (p_ro < 0.0) throw std::domain_error("cwp_net_power: p_ro must be nonnegative");
    const double net = p_tp - p_ro;
    if (net < 0.0) {
        throw InfeasibleError("cwp_net_power: desalination draw exceeds thermal output");
    }
    return net;
}

double chp_heat_from_ratio(double p_chp, double b) {
    require_finite(p_chp, "p_chp");
    require_finite(b, "b");
    if (p_chp < 0.0 || b < 0.0) throw std::domain_error("chp_heat_from_ratio: negative input");
    return b * p_chp;
}

double hst_carried_heat(double g, double t_sw, double t_rw, double c_w) {
    require_finite(g, "g");
    require_finite(t_sw, "t_sw");
    require_finite(t_rw, "t_rw");
    if (g < 0.0) throw std::domain_error("hst_carried_heat: g must be nonnegative");
    if (t_sw < t_rw) throw std::domain_error("hst_carried_heat: supply below return temperature");
    return c_w * g * (t_sw - t_rw);
}

double hst_heat_loss(double t_sw, double t_env, double upsilon, double length_m) {
    require_finite(t_sw, "t_sw");
    require_finite(t_env, "t_env");
    // Eq. arguments in W/m; result converted to kW.
    return kTwoPi * (t_sw - t_env) / upsilon * length_m / 1000.0;
}

double hst_required_supply_temp(double h_delivered, double g, double t_rw, double c_w) {
    require_finite(h_delivered, "h_delivered");
    if (g <= 0.0) throw std::domain_error("hst_required_supply_temp: g must be positive");
    return t_rw + h_delivered / (c_w * g);
}

bool box_feasible(const DispatchDecision& d, const DeviceParams& p, double tol) {
    const auto within = [tol](double v, double lo, double hi) {
        return v >= lo - tol && v <= hi + tol;
    };
    if (!std::isfinite(d.p_chp) || !std::isfinite(d.h_chp) || !std::isfinite(d.p_cwp) ||
        !std::isfinite(d.w_cwp) || !std::isfinite(d.p_gt) || !std::isfinite(d.h_gb)) {
        return false;
    }
    if (!within(d.p_chp, p.chp.p_min, p.chp.p_max)) return false;
    if (d.p_chp > tol) {
        const double b = d.h_chp / d.p_chp;
        if (!within(b, p.chp.b_min, p.chp.b_max)) return false;
    } else if (std::abs(d.h_chp) > tol) {
        return false;
    }
    if (d.p_cwp < -tol || d.w_cwp < -tol) return false;
    if (!within(d.thermal_power(p.cwp.q_coeff), p.cwp.p_tp_min, p.cwp.p_tp_max)) return false;
    if (!within(d.p_gt, p.gt.p_min, p.gt.p_max)) return false;
    if (!within(d.h_gb, p.gb.h_min, p.gb.h_max)) return false;
    return true;
}

bool step_feasible(const DispatchDecision& d, const DispatchDecision& prev,
                   const DeviceParams& p, double tol) {
    if (!box_feasible(d, p, tol)) return false;
    if (std::abs(d.p_chp - prev.p_chp) > p.chp.ramp_max + tol) return false;
    const double tp = d.thermal_power(p.cwp.q_coeff);
    const double prev_tp = prev.thermal_power(p.cwp.q_coeff);
    if (std::abs(tp - prev_tp) > p.cwp.ramp_tp_max + tol) return false;
    return true;
}

DispatchDecision project_feasible(const DispatchDecision& raw,
                                  const DispatchDecision& prev,
                                  const DeviceParams& p) {
    if (!box_feasible(prev, p, 1e-6)) {
        throw std::invalid_argument("project_feasible: previous decision is infeasible");
    }

    DispatchDecision out;

    // CHP: box intersected with ramp window (prev feasible, so nonempty).
    const double chp_lo = std::max(p.chp.p_min, prev.p_chp - p.chp.ramp_max);
    const double chp_hi = std::min(p.chp.p_max, prev.p_chp + p.chp.ramp_max);
    out.p_chp = clamp_interval(raw.p_chp, chp_lo, chp_hi);
    if (out.p_chp > 0.0) {
        const double b_raw = raw.p_chp > 0.0 ? raw.h_chp / raw.p_chp
                                             : (raw.h_chp > 0.0 ? p.chp.b_max : p.chp.b_min);
        const double b = clamp_interval(b_raw, p.chp.b_min, p.chp.b_max);
        out.h_chp = b * out.p_chp;
    } else {
        out.h_chp = 0.0;
    }

    // CWP: clamp gross thermal power, keep water production when the net
    // output can absorb the change.
    const double q = p.cwp.q_coeff;
    const double prev_tp = prev.thermal_power(q);
    const double tp_lo = std::max(p.cwp.p_tp_min, prev_tp - p.cwp.ramp_tp_max);
    const double tp_hi = std::min(p.cwp.p_tp_max, prev_tp + p.cwp.ramp_tp_max);
    const double w_raw = std::max(0.0, raw.w_cwp);
    const double tp = clamp_interval(raw.p_cwp + q * w_raw, tp_lo, tp_hi);
    double net = tp - q * w_raw;
    if (net < 0.0) {
        out.w_cwp = tp / q;
        out.p_cwp = 0.0;
    } else {
        out.w_cwp = w_raw;
        out.p_cwp = net;
    }

    out.p_gt = clamp_interval(raw.p_gt, p.gt.p_min, p.gt.p_max);
    out.h_gb = clamp_interval(raw.h_gb, p.gb.h_min, p.gb.h_max);
    return out;
}

DispatchDecision neutral_decision(const DeviceParams& p) {
    DispatchDecision d;
    d.p_chp = 0.5 * (p.chp.p_min + p.chp.p_max);
    d.h_chp = 0.5 * (p.chp.b_min + p.chp.b_max) * d.p_chp;
    const double tp_mid = 0.5 * (p.cwp.p_tp_min + p.cwp.p_tp_max);
    d.w_cwp = std::min(0.5 * p.cwp.max_water_rate(), tp_mid / p.cwp.q_coeff);
    d.p_cwp = tp_mid - p.cwp.q_coeff * d.w_cwp;
    d.p_gt = 0.5 * (p.gt.p_min + p.gt.p_max);
    d.h_gb = 0.5 * (p.gb.h_min + p.gb.h_max);
    return d;
}

std::string describe(const DispatchDecision& d) {
    std::ostringstream os;
    os << "p_chp=" << d.p_chp << " h_chp=" << d.h_chp << " p_cwp=" << d.p_cwp
       << " w_cwp=" << d.w_cwp << " p_gt=" << d.p_gt << " h_gb=" << d.h_gb;
    return os.str();
}

}  // namespace ies
