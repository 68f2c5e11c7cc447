#pragma once

#include "ies/devices.hpp"

namespace ies {

/// Gas pricing, conversion efficiencies, and carbon accounting for one period.
struct CostParams {
    double gas_price = 0.3;    ///< currency per kWh of gas calorific value
    double eta_chp = 0.9;      ///< CHP conversion efficiency
    double eta_cwp = 0.9;      ///< CWP thermal unit conversion efficiency
    double eta_gt = 0.35;      ///< gas turbine conversion efficiency
    double eta_gb = 0.9;       ///< gas boiler conversion efficiency
    double co2_price = 0.05;   ///< currency per kg CO2
    double co2_per_kwh = 0.2;  ///< kg CO2 per kWh of gas calorific value
    void validate() const;
};

/// Per-device fuel cost for one period [currency].
struct FuelCosts {
    double m_chp = 0.0;
    double m_cwp = 0.0;
    double m_gt = 0.0;
    double m_gb = 0.0;
    double total() const { return m_chp + m_cwp + m_gt + m_gb; }
};

/// Per-device gas calorific consumption for one period [kWh-thermal].
struct Calorifics {
    double h_chp = 0.0;
    double h_cwp = 0.0;
    double h_gt = 0.0;
    double h_gb = 0.0;
    double total() const { return h_chp + h_cwp + h_gt + h_gb; }
};

/// Gas energy consumed by each device. The CWP entry covers the full gross
/// electric output p_cwp + q*w, so desalination electricity is fuel-costed
/// at the thermal unit's efficiency.
Calorifics calorific_values(const DispatchDecision& d, const CostParams& c, double q_coeff);

/// Fuel cost of each device: gas_price times its calorific consumption.
FuelCosts device_fuel_costs(const DispatchDecision& d, const CostParams& c, double q_coeff);

/// Emission cost: co2_price * co2_per_kwh * total calorific consumption.
double carbon_cost(const Calorifics& h, const CostParams& c);

/// Combined fuel plus carbon cost of one period's decision.
double total_cost(const DispatchDecision& d, const CostParams& c, double q_coeff);

}  // namespace ies
