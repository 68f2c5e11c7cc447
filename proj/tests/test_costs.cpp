#include <doctest.h>

#include <cmath>

#include "ies/costs.hpp"
#include "ies/errors.hpp"
#include "ies/rng.hpp"

using namespace ies;

TEST_CASE("calorific and fuel values match hand calculations") {
    const CostParams c;
    DispatchDecision d;
    d.p_chp = 3000.0;
    d.h_chp = 2000.0;
    d.p_cwp = 4200.0;
    d.w_cwp = 100.0;  // gross 4200 + 800 = 5000
    d.p_gt = 1000.0;
    d.h_gb = 900.0;

    const Calorifics h = calorific_values(d, c, 8.0);
    CHECK(h.h_chp == doctest::Approx(5000.0 / 0.9).epsilon(1e-12));   // 5555.56
    CHECK(h.h_cwp == doctest::Approx(5000.0 / 0.9).epsilon(1e-12));
    CHECK(h.h_gt == doctest::Approx(1000.0 / 0.35).epsilon(1e-12));   // 2857.14
    CHECK(h.h_gb == doctest::Approx(1000.0).epsilon(1e-12));

    const FuelCosts m = device_fuel_costs(d, c, 8.0);
    CHECK(m.m_chp == doctest::Approx(0.3 * 5000.0 / 0.9).epsilon(1e-12));  // 1666.67
    CHECK(m.m_cwp == doctest::Approx(0.3 * 5000.0 / 0.9).epsilon(1e-12));
    CHECK(m.total() == doctest::Approx(0.3 * h.total()).epsilon(1e-12));
}

TEST_CASE("carbon cost is price times intensity times calorific total") {
    const CostParams c;
    Calorifics h;
    h.h_chp = 1000.0;
    CHECK(carbon_cost(h, c) == doctest::Approx(0.05 * 0.2 * 1000.0).epsilon(1e-12));  // 10
}

TEST_CASE("fuel cost equals gas price times calorific value identically") {
    const CostParams c;
    Rng rng(17);
    for (int i = 0; i < 10000; ++i) {
        DispatchDecision d;
        d.p_chp = rng.uniform(0.0, 5000.0);
        d.h_chp = rng.uniform(0.0, 7000.0);
        d.p_cwp = rng.uniform(0.0, 5000.0);
        d.w_cwp = rng.uniform(0.0, 625.0);
        d.p_gt = rng.uniform(0.0, 3000.0);
        d.h_gb = rng.uniform(0.0, 3000.0);
        const Calorifics h = calorific_values(d, c, 8.0);
        const FuelCosts m = device_fuel_costs(d, c, 8.0);
        CHECK(m.m_chp == doctest::Approx(c.gas_price * h.h_chp).epsilon(1e-12));
        CHECK(m.m_cwp == doctest::Approx(c.gas_price * h.h_cwp).epsilon(1e-12));
        CHECK(m.m_gt == doctest::Approx(c.gas_price * h.h_gt).epsilon(1e-12));
        CHECK(m.m_gb == doctest::Approx(c.gas_price * h.h_gb).epsilon(1e-12));
        CHECK(total_cost(d, c, 8.0) ==
              doctest::Approx(m.total() + carbon_cost(h, c)).epsilon(1e-12));
    }
}

TEST_CASE("total cost is positively homogeneous in the decision") {
    const CostParams c;
    DispatchDecision d;
    d.p_chp = 2500.0;
    d.h_chp = 1000.0;
    d.p_cwp = 2000.0;
    d.w_cwp = 180.0;
    d.p_gt = 500.0;
    d.h_gb = 700.0;
    const double base = total_cost(d, c, 8.0);
    for (double a : {0.0, 0.5, 2.0, 7.25}) {
        DispatchDecision s = d;
        s.p_chp *= a;
        s.h_chp *= a;
        s.p_cwp *= a;
        s.w_cwp *= a;
        s.p_gt *= a;
        s.h_gb *= a;
        CHECK(total_cost(s, c, 8.0) == doctest::Approx(a * base).epsilon(1e-12));
    }
}

TEST_CASE("zero decision costs nothing") {
    CHECK(total_cost(DispatchDecision{}, CostParams{}, 8.0) == 0.0);
}

TEST_CASE("cost parameter validation") {
    CostParams c;
    c.eta_gt = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = CostParams{};
    c.eta_chp = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = CostParams{};
    c.gas_price = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_NOTHROW(CostParams{}.validate());
}
