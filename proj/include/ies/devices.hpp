#pragma once

#include <string>

namespace ies {

/// Combined water and power unit: a thermal generator whose warm cooling
/// water feeds a reverse-osmosis desalination stage.
struct CwpParams {
    double p_tp_max = 5000.0;     ///< thermal unit electric upper limit [kW]
    double p_tp_min = 1000.0;     ///< thermal unit electric lower limit [kW]
    double ramp_tp_max = 3500.0;  ///< thermal unit ramp limit [kW/h]
    double q_coeff = 8.0;         ///< electricity per unit freshwater [kWh/m3]
    double v_t0 = 500.0;          ///< membrane permeation volume at reference temp [m3]
    double temp_coeff = 0.025;    ///< permeation gain per degC of inlet warming [1/degC]
    // Inert configuration: retained for completeness of the device record,
    // not consumed by any model path (q_coeff is taken as fixed).
    double pressure_coeff = 4.17;  ///< [MPa*L/mol]
    double seawater_conc = 0.6;    ///< [mol/L]
    double recovery_rate = 0.4;    ///< dimensionless

    /// Largest sustainable freshwater production rate [m3/h].
    double max_water_rate() const { return p_tp_max / q_coeff; }
    void validate() const;
};

/// Combined heat and power unit with a variable thermoelectric ratio b.
struct ChpParams {
    double p_max = 5000.0;    ///< electric upper limit [kW]
    double p_min = 1000.0;    ///< electric lower limit [kW]
    double b_min = 0.0;       ///< thermoelectric ratio lower bound
    double b_max = 1.4;       ///< thermoelectric ratio upper bound
    double ramp_max = 3500.0; ///< ramp limit [kW/h]
    void validate() const;
};

/// Fast-response gas turbine; box limits only, no ramp constraint.
struct GtParams {
    double p_max = 3000.0;
    double p_min = 0.0;
    void validate() const;
};

/// Fast-response gas boiler; box limits only, no ramp constraint.
struct GbParams {
    double h_max = 3000.0;
    double h_min = 0.0;
    void validate() const;
};

/// Hydrothermal simultaneous transmission pipeline: heat and the product
/// freshwater share one pipe, so the mass flow is set by water delivery.
struct HstParams {
    double c_w = 4.186;      ///< specific heat of water [kJ/(kg*K)]
    double t_min = 55.0;     ///< pipe supply temperature lower limit [degC]
    double t_max = 95.0;     ///< pipe supply temperature upper limit [degC]
    double g_min = 5.0;      ///< pipe mass flow lower limit [kg/s]
    double g_max = 200.0;    ///< pipe mass flow upper limit [kg/s]
    double upsilon = 50.0;   ///< pipe-to-ambient thermal resistance [(m*K)/W]
    double length_m = 1000.0;///< pipe length [m]
    double t_return = 50.0;  ///< fixed return-side temperature [degC]
    void validate() const;
};

struct DeviceParams {
    ChpParams chp;
    CwpParams cwp;
    GtParams gt;
    GbParams gb;
    HstParams hst;
    void validate() const;
};

/// Controllable outputs for one scheduling period (delta t = 1 h).
/// Powers in kW, freshwater production in m3/h.
struct DispatchDecision {
    double p_chp = 0.0;  ///< CHP electric output
    double h_chp = 0.0;  ///< CHP thermal output (= b * p_chp)
    double p_cwp = 0.0;  ///< CWP net external electric output
    double w_cwp = 0.0;  ///< CWP freshwater production rate
    double p_gt = 0.0;   ///< gas turbine electric output
    double h_gb = 0.0;   ///< gas boiler thermal output

    /// Gross electric power of the CWP thermal unit: net output plus the
    /// desalination draw q * w.
    double thermal_power(double q_coeff) const { return p_cwp + q_coeff * w_cwp; }
};

// --- device physics ---------------------------------------------------------

/// Membrane permeation volume after warming the inlet by delta_t degC:
/// v_t0 * (1 + delta_t * a).
double permeation_rate(double v_t0, double delta_t, double a);

/// Electric power drawn by the RO stage to produce w_cwp m3/h of freshwater.
double ro_power(double q_coeff, double w_cwp);

/// Net external output of the CWP unit. Throws InfeasibleError when the RO
/// draw exceeds the thermal unit's output.
double cwp_net_power(double p_tp, double p_ro);

/// CHP thermal output implied by electric output and thermoelectric ratio.
double chp_heat_from_ratio(double p_chp, double b);

/// Heat carried by the pipeline at mass flow g between supply and return
/// temperatures [kW].
double hst_carried_heat(double g, double t_sw, double t_rw, double c_w);

/// Radiative transmission loss of the pipeline [kW].
double hst_heat_loss(double t_sw, double t_env, double upsilon, double length_m);

/// Supply temperature needed to deliver h_delivered at flow g. The caller
/// checks the result against the pipe temperature band and g against the
/// flow band.
double hst_required_supply_temp(double h_delivered, double g, double t_rw, double c_w);

// --- feasibility ------------------------------------------------------------

/// Box constraints only: device limits that do not involve the previous period.
bool box_feasible(const DispatchDecision& d, const DeviceParams& p, double tol = 1e-9);

/// Box constraints plus ramp coupling against the previous decision.
bool step_feasible(const DispatchDecision& d, const DispatchDecision& prev,
                   const DeviceParams& p, double tol = 1e-9);

/// Clamp a raw decision onto the feasible set given the previous period.
///
/// p_chp is clamped to its box intersected with the ramp window; the implied
/// thermoelectric ratio is clamped and h_chp recomputed. The CWP gross power
/// p_cwp + q*w is clamped to its box/ramp window with water production
/// preserved when possible: p_cwp absorbs the adjustment and w is reduced
/// only when p_cwp would go negative. GT and GB are box-clamped. Idempotent.
///
/// Throws std::invalid_argument when prev violates its own box constraints.
DispatchDecision project_feasible(const DispatchDecision& raw,
                                  const DispatchDecision& prev,
                                  const DeviceParams& p);

/// Mid-range feasible decision used to seed period-0 ramp constraints.
DispatchDecision neutral_decision(const DeviceParams& p);

std::string describe(const DispatchDecision& d);

}  // namespace ies
