#include "ies/costs.hpp"

#include "ies/errors.hpp"

namespace ies {

void CostParams::validate() const {
    auto check_eta = [](double eta, const char* name) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw ConfigError(std::string(name) + " must be in (0, 1]");
        }
    };
    check_eta(eta_chp, "cost.eta_chp");
    check_eta(eta_cwp, "cost.eta_cwp");
    check_eta(eta_gt, "cost.eta_gt");
    check_eta(eta_gb, "cost.eta_gb");
    if (gas_price < 0.0) throw ConfigError("cost.gas_price must be >= 0");
    if (co2_price < 0.0) throw ConfigError("cost.co2_price must be >= 0");
    if (co2_per_kwh < 0.0) throw ConfigError("cost.co2_per_kwh must be >= 0");
}

Calorifics calorific_values(const DispatchDecision& d, const CostParams& c, double q_coeff) {
    Calorifics h;
    h.h_chp = (d.p_chp + d.h_chp) / c.eta_chp;
    h.h_cwp = d.thermal_power(q_coeff) / c.eta_cwp;
    h.h_gt = d.p_gt / c.eta_gt;
    h.h_gb = d.h_gb / c.eta_gb;
    return h;
}

FuelCosts device_fuel_costs(const DispatchDecision& d, const CostParams& c, double q_coeff) {
    const Calorifics h = calorific_values(d, c, q_coeff);
    FuelCosts m;
    m.m_chp = c.gas_price * h.h_chp;
    m.m_cwp = c.gas_price * h.h_cwp;
    m.m_gt = c.gas_price * h.h_gt;
    m.m_gb = c.gas_price * h.h_gb;
    return m;
}

double carbon_cost(const Calorifics& h, const CostParams& c) {
    return c.co2_price * c.co2_per_kwh * h.total();
}

double total_cost(const DispatchDecision& d, const CostParams& c, double q_coeff) {
    const Calorifics h = calorific_values(d, c, q_coeff);
    return c.gas_price * h.total() + carbon_cost(h, c);
}

}  // namespace ies
