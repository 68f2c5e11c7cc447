#include "ies/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ies/errors.hpp"
#include "ies/rng.hpp"

namespace ies {

namespace {

constexpr double kTol = 1e-7;

double now_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace

void GridSpec::validate() const {
    if (n_pchp < 2 || n_b < 2 || n_pgt < 2) {
        throw ConfigError("oracle grid needs at least 2 points per dimension");
    }
    if (nodes() > max_nodes) {
        throw ConfigError("oracle grid exceeds the per-period node budget");
    }
}

std::optional<DispatchDecision> reduce_decision(double p_chp, double b, double p_gt,
                                                const PeriodLoads& loads,
                                                const DeviceParams& devices) {
    const ChpParams& chp = devices.chp;
    if (p_chp < chp.p_min - kTol || p_chp > chp.p_max + kTol) return std::nullopt;
    if (b < chp.b_min - kTol || b > chp.b_max + kTol) return std::nullopt;
    if (p_gt < devices.gt.p_min - kTol || p_gt > devices.gt.p_max + kTol) return std::nullopt;

    DispatchDecision d;
    d.p_chp = p_chp;
    d.h_chp = chp_heat_from_ratio(p_chp, b);
    d.p_gt = p_gt;
    d.w_cwp = loads.w_load;

    const HstAnalysis hst = analyze_hst(loads.h_load, d.w_cwp, loads.t_env, devices.hst);
    if (!hst.feasible) return std::nullopt;

    // Strict heat balance: the boiler covers exactly the remaining effective
    // load, and CHP over-generation is not absorbed anywhere.
    const double h_gb = hst.h_load_eff - d.h_chp;
    if (h_gb < devices.gb.h_min - kTol || h_gb > devices.gb.h_max + kTol) return std::nullopt;
    d.h_gb = std::clamp(h_gb, devices.gb.h_min, devices.gb.h_max);

    const double p_cwp = loads.p_load - loads.p_wt - p_chp - p_gt;
    if (p_cwp < -kTol) return std::nullopt;
    d.p_cwp = std::max(0.0, p_cwp);
    const double p_tp = d.thermal_power(devices.cwp.q_coeff);
    if (p_tp < devices.cwp.p_tp_min - kTol || p_tp > devices.cwp.p_tp_max + kTol) {
        return std::nullopt;
    }
    return d;
}

DpResult dp_oracle(const Scenario& scenario, const GridSpec& grid, const DeviceParams& devices,
                   const CostParams& costs) {
    grid.validate();
    devices.validate();
    costs.validate();
    scenario.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const std::size_t T = scenario.periods();
    const std::vector<double> pc = linspace(devices.chp.p_min, devices.chp.p_max, grid.n_pchp);
    const std::vector<double> bs = linspace(devices.chp.b_min, devices.chp.b_max, grid.n_b);
    const std::vector<double> pg = linspace(devices.gt.p_min, devices.gt.p_max, grid.n_pgt);
    const std::size_t S = grid.n_pchp * grid.n_pgt;
    const double q = devices.cwp.q_coeff;
    constexpr double inf = std::numeric_limits<double>::infinity();

    const DispatchDecision neutral = neutral_decision(devices);

    std::vector<double> v_prev(S, inf);
    std::vector<double> v_cur(S, inf);
    std::vector<double> ptp_prev(S, 0.0);
    std::vector<double> ptp_cur(S, 0.0);
    std::vector<double> node_cost(S, inf);
    std::vector<std::vector<std::int32_t>> back(T, std::vector<std::int32_t>(S, -1));
    std::vector<std::vector<std::int32_t>> b_choice(T, std::vector<std::int32_t>(S, -1));

    DpResult res;
    for (std::size_t t = 0; t < T; ++t) {
        const PeriodLoads loads = slice(scenario, t);

        // Best b (lowest cost, then lowest index) for every (p_chp, p_gt) node.
        for (std::size_t i = 0; i < grid.n_pchp; ++i) {
            for (std::size_t j = 0; j < grid.n_pgt; ++j) {
                const std::size_t s = i * grid.n_pgt + j;
                node_cost[s] = inf;
                ptp_cur[s] = loads.p_load - loads.p_wt - pc[i] - pg[j] + q * loads.w_load;
                for (std::size_t k = 0; k < grid.n_b; ++k) {
                    const auto d = reduce_decision(pc[i], bs[k], pg[j], loads, devices);
                    if (!d) continue;
                    const double c = total_cost(*d, costs, q);
                    if (c < node_cost[s]) {
                        node_cost[s] = c;
                        b_choice[t][s] = static_cast<std::int32_t>(k);
                    }
                }
            }
        }

        bool any = false;
        for (std::size_t i = 0; i < grid.n_pchp; ++i) {
            for (std::size_t j = 0; j < grid.n_pgt; ++j) {
                const std::size_t s = i * grid.n_pgt + j;
                v_cur[s] = inf;
                if (node_cost[s] == inf) continue;
                if (t == 0) {
                    if (std::abs(pc[i] - neutral.p_chp) > devices.chp.ramp_max + 1e-9) continue;
                    if (std::abs(ptp_cur[s] - neutral.thermal_power(q)) >
                        devices.cwp.ramp_tp_max + 1e-9) {
                        continue;
                    }
                    v_cur[s] = node_cost[s];
                    any = true;
                    continue;
                }
                double best = inf;
                std::int32_t best_prev = -1;
                for (std::size_t i0 = 0; i0 < grid.n_pchp; ++i0) {
                    if (std::abs(pc[i] - pc[i0]) > devices.chp.ramp_max + 1e-9) continue;
                    for (std::size_t j0 = 0; j0 < grid.n_pgt; ++j0) {
                        const std::size_t s0 = i0 * grid.n_pgt + j0;
                        if (v_prev[s0] == inf) continue;
                        if (std::abs(ptp_cur[s] - ptp_prev[s0]) >
                            devices.cwp.ramp_tp_max + 1e-9) {
                            continue;
                        }
                        if (v_prev[s0] < best) {
                            best = v_prev[s0];
                            best_prev = static_cast<std::int32_t>(s0);
                        }
                    }
                }
                if (best_prev >= 0) {
                    v_cur[s] = best + node_cost[s];
                    back[t][s] = best_prev;
                    any = true;
                }
            }
        }
        if (!any) {
            res.feasible = false;
            res.infeasible_period = t;
            res.solve_seconds = now_seconds(t_start);
            return res;
        }
        std::swap(v_prev, v_cur);
        std::swap(ptp_prev, ptp_cur);
    }

    // Backtrack from the cheapest final state.
    std::size_t s_best = 0;
    double best = inf;
    for (std::size_t s = 0; s < S; ++s) {
        if (v_prev[s] < best) {
            best = v_prev[s];
            s_best = s;
        }
    }
    res.total_cost = best;
    res.feasible = true;
    res.decisions.resize(T);
    std::size_t s = s_best;
    for (std::size_t t = T; t-- > 0;) {
        const std::size_t i = s / grid.n_pgt;
        const std::size_t j = s % grid.n_pgt;
        const std::size_t k = static_cast<std::size_t>(b_choice[t][s]);
        const auto d = reduce_decision(pc[i], bs[k], pg[j], slice(scenario, t), devices);
        res.decisions[t] = *d;
        if (t > 0) s = static_cast<std::size_t>(back[t][s]);
    }
    res.solve_seconds = now_seconds(t_start);
    return res;
}

void SwarmConfig::validate() const {
    if (population == 0) throw ConfigError("swarm.population must be positive");
    if (runs == 0) throw ConfigError("swarm.runs must be positive");
    if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0)) {
        throw ConfigError("swarm coefficients must be >= 0");
    }
    if (penalty_factor < 0.0) throw ConfigError("swarm.penalty_factor must be >= 0");
}

double swarm_penalty_weight(const RewardConfig& rc, double penalty_factor) {
    return penalty_factor * rc.cost_norm / rc.imbalance_norm;
}

double swarm_objective(const IesEnv& env, const std::vector<double>& x, double penalty_weight,
                       double* cost_out, double* imbalance_out,
                       std::vector<DispatchDecision>* decisions_out) {
    const std::size_t T = env.periods();
    if (x.size() != T * 6) throw std::invalid_argument("candidate length must be periods * 6");
    if (decisions_out) decisions_out->clear();
    EnvState st = env.reset();
    double cost = 0.0;
    double imb = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        std::array<double, 6> a;
        std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(t * 6), 6, a.begin());
        StepOutcome out = env.step(st, a);
        cost += out.info.cost_total;
        imb += out.info.imbalance_d;
        if (decisions_out) decisions_out->push_back(out.info.decision);
        st = std::move(out.next_state);
    }
    if (cost_out) *cost_out = cost;
    if (imbalance_out) *imbalance_out = imb;
    return cost + penalty_weight * imb;
}

namespace {

struct RunOutcome {
    SwarmRunStat stat;
    std::vector<double> best_x;
};

RunOutcome pso_run(const IesEnv& env, const SwarmConfig& cfg, double pw, std::uint64_t seed) {
    const auto t_start = std::chrono::steady_clock::now();
    Rng rng(seed);
    const std::size_t dim = env.periods() * 6;
    const std::size_t n = cfg.population;

    std::vector<std::vector<double>> pos(n, std::vector<double>(dim));
    std::vector<std::vector<double>> vel(n, std::vector<double>(dim, 0.0));
    for (auto& p : pos) {
        for (double& v : p) v = rng.uniform(-1.0, 1.0);
    }
    std::vector<std::vector<double>> pbest = pos;
    std::vector<double> pbest_f(n);
    for (std::size_t i = 0; i < n; ++i) pbest_f[i] = swarm_objective(env, pos[i], pw);
    std::size_t g = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (pbest_f[i] < pbest_f[g]) g = i;
    }
    std::vector<double> gbest = pbest[g];
    double gbest_f = pbest_f[g];

    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                double v = cfg.inertia * vel[i][d] + cfg.cognitive * r1 * (pbest[i][d] - pos[i][d]) +
                           cfg.social * r2 * (gbest[d] - pos[i][d]);
                v = std::clamp(v, -1.0, 1.0);
                vel[i][d] = v;
                pos[i][d] = std::clamp(pos[i][d] + v, -1.0, 1.0);
            }
            const double f = swarm_objective(env, pos[i], pw);
            if (f < pbest_f[i]) {
                pbest_f[i] = f;
                pbest[i] = pos[i];
                if (f < gbest_f) {
                    gbest_f = f;
                    gbest = pos[i];
                }
            }
        }
    }

    RunOutcome out;
    out.best_x = std::move(gbest);
    out.stat.objective = gbest_f;
    swarm_objective(env, out.best_x, pw, &out.stat.cost, &out.stat.imbalance);
    out.stat.seconds = now_seconds(t_start);
    return out;
}

RunOutcome woa_run(const IesEnv& env, const SwarmConfig& cfg, double pw, std::uint64_t seed) {
    const auto t_start = std::chrono::steady_clock::now();
    Rng rng(seed);
    const std::size_t dim = env.periods() * 6;
    const std::size_t n = cfg.population;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<std::vector<double>> pos(n, std::vector<double>(dim));
    for (auto& p : pos) {
        for (double& v : p) v = rng.uniform(-1.0, 1.0);
    }
    std::vector<double> fit(n);
    for (std::size_t i = 0; i < n; ++i) fit[i] = swarm_objective(env, pos[i], pw);
    std::size_t lead = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (fit[i] < fit[lead]) lead = i;
    }
    std::vector<double> leader = pos[lead];
    double leader_f = fit[lead];

    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        const double a = 2.0 - 2.0 * static_cast<double>(iter) / static_cast<double>(cfg.max_iters);
        const double a2 = -1.0 - static_cast<double>(iter) / static_cast<double>(cfg.max_iters);
        for (std::size_t i = 0; i < n; ++i) {
            // One behavior draw per whale; the move is coherent across dims.
            const double r1 = rng.uniform01();
            const double r2 = rng.uniform01();
            const double big_a = 2.0 * a * r1 - a;
            const double c = 2.0 * r2;
            const double l = (a2 - 1.0) * rng.uniform01() + 1.0;
            const double p = rng.uniform01();
            for (std::size_t d = 0; d < dim; ++d) {
                double next;
                if (p < 0.5) {
                    if (std::abs(big_a) >= 1.0) {
                        const std::size_t r = rng.uniform_below(n);
                        const double dist = std::abs(c * pos[r][d] - pos[i][d]);
                        next = pos[r][d] - big_a * dist;
                    } else {
                        const double dist = std::abs(c * leader[d] - pos[i][d]);
                        next = leader[d] - big_a * dist;
                    }
                } else {
                    const double dist = std::abs(leader[d] - pos[i][d]);
                    next = dist * std::exp(cfg.spiral_b * l) * std::cos(two_pi * l) + leader[d];
                }
                pos[i][d] = std::clamp(next, -1.0, 1.0);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            fit[i] = swarm_objective(env, pos[i], pw);
            if (fit[i] < leader_f) {
                leader_f = fit[i];
                leader = pos[i];
            }
        }
    }

    RunOutcome out;
    out.best_x = std::move(leader);
    out.stat.objective = leader_f;
    swarm_objective(env, out.best_x, pw, &out.stat.cost, &out.stat.imbalance);
    out.stat.seconds = now_seconds(t_start);
    return out;
}

template <typename RunFn>
SwarmResult run_swarm(const IesEnv& env, const SwarmConfig& cfg, RunFn run_fn) {
    cfg.validate();
    const double pw = swarm_penalty_weight(env.config().reward, cfg.penalty_factor);

    std::vector<RunOutcome> outcomes(cfg.runs);
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(hw, cfg.runs);
    {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t k = 0; k < n_threads; ++k) {
            threads.emplace_back([&, k] {
                for (std::size_t r = k; r < cfg.runs; r += n_threads) {
                    outcomes[r] = run_fn(env, cfg, pw, cfg.seed + r);
                }
            });
        }
        for (auto& th : threads) th.join();
    }

    SwarmResult res;
    res.runs.reserve(cfg.runs);
    std::size_t best_run = 0;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        res.runs.push_back(outcomes[r].stat);
        res.mean_cost += outcomes[r].stat.cost;
        res.mean_objective += outcomes[r].stat.objective;
        res.mean_seconds += outcomes[r].stat.seconds;
        if (outcomes[r].stat.objective < outcomes[best_run].stat.objective) best_run = r;
    }
    const double nr = static_cast<double>(cfg.runs);
    res.mean_cost /= nr;
    res.mean_objective /= nr;
    res.mean_seconds /= nr;
    res.best_objective = outcomes[best_run].stat.objective;
    res.best_cost = outcomes[best_run].stat.cost;
    swarm_objective(env, outcomes[best_run].best_x, pw, nullptr, nullptr, &res.best_decisions);
    return res;
}

}  // namespace

SwarmResult pso_dispatch(const IesEnv& env, const SwarmConfig& cfg) {
    return run_swarm(env, cfg, pso_run);
}

SwarmResult woa_dispatch(const IesEnv& env, const SwarmConfig& cfg) {
    return run_swarm(env, cfg, woa_run);
}

}  // namespace ies
