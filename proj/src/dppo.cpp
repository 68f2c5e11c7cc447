#include "ies/dppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "ies/errors.hpp"

namespace ies {

void Hyperparams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("ppo.gamma must be in (0, 1)");
    if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw ConfigError("ppo.clip_eps must be in (0, 1)");
    if (minibatch == 0) throw ConfigError("ppo.minibatch must be positive");
    if (lr_actor < 0.0 || lr_critic < 0.0) throw ConfigError("learning rates must be >= 0");
    if (episodes_total == 0) throw ConfigError("ppo.episodes must be positive");
    if (workers == 0) throw ConfigError("ppo.workers must be positive");
    if (epochs_per_update == 0) throw ConfigError("ppo.epochs_per_update must be positive");
    if (ma_window == 0) throw ConfigError("ppo.ma_window must be positive");
    if (hidden_dims.empty()) throw ConfigError("ppo.hidden_dims must not be empty");
    for (std::size_t d : hidden_dims) {
        if (d == 0) throw ConfigError("ppo.hidden_dims entries must be positive");
    }
}

std::vector<double> compute_returns(const std::vector<double>& rewards, double gamma) {
    if (rewards.empty()) throw std::invalid_argument("empty trajectory");
    std::vector<double> ret(rewards.size());
    double acc = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        acc = rewards[i] + gamma * acc;
        ret[i] = acc;
    }
    return ret;
}

std::vector<double> raw_advantages(const std::vector<double>& returns,
                                   const std::vector<double>& values) {
    if (returns.size() != values.size()) {
        throw std::invalid_argument("returns/values length mismatch");
    }
    std::vector<double> adv(returns.size());
    for (std::size_t i = 0; i < adv.size(); ++i) adv[i] = returns[i] - values[i];
    return adv;
}

void normalize_advantages(std::vector<double>& adv) {
    if (adv.empty()) return;
    const double n = static_cast<double>(adv.size());
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= n;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    var /= n;
    const double denom = std::sqrt(var) + 1e-8;
    for (double& a : adv) a = (a - mean) / denom;
}

double ppo_ratio(double new_log_prob, double old_log_prob) {
    return std::exp(std::clamp(new_log_prob - old_log_prob, -20.0, 20.0));
}

double actor_loss(const std::vector<double>& ratios, const std::vector<double>& advantages,
                  double clip_eps) {
    if (ratios.size() != advantages.size()) {
        throw std::invalid_argument("ratios/advantages length mismatch");
    }
    if (ratios.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double unclipped = ratios[i] * advantages[i];
        const double clipped = std::clamp(ratios[i], 1.0 - clip_eps, 1.0 + clip_eps) * advantages[i];
        s += std::min(unclipped, clipped);
    }
    return -s / static_cast<double>(ratios.size());
}

double critic_loss(const std::vector<double>& values, const std::vector<double>& returns) {
    if (values.size() != returns.size()) {
        throw std::invalid_argument("values/returns length mismatch");
    }
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double e = values[i] - returns[i];
        s += e * e;
    }
    return s / static_cast<double>(values.size());
}

namespace {

struct EpisodeData {
    std::vector<Transition> steps;
    double total_reward = 0.0;
};

EpisodeData rollout_episode(const IesEnv& env_proto, const SceneGenConfig& scene_cfg,
                            const GaussianPolicy& actor, const Mlp& critic, Rng& rng) {
    IesEnv env = env_proto;
    env.set_scenario(generate_scene(scene_cfg, rng));
    EpisodeData ep;
    ep.steps.reserve(env.periods());
    EnvState st = env.reset();
    const std::array<double, kActionDim> sd = actor.stds();
    while (true) {
        Transition tr;
        tr.obs = st.obs;
        const std::vector<double> mean = forward(actor.mean_net, st.obs);
        for (std::size_t i = 0; i < kActionDim; ++i) {
            tr.action[i] = mean[i] + sd[i] * rng.gaussian();
        }
        tr.log_prob = policy_log_prob(actor, mean, tr.action);
        tr.value = forward(critic, st.obs)[0];
        StepOutcome out = env.step(st, tr.action);
        tr.reward = out.reward;
        tr.done = out.done;
        ep.total_reward += out.reward;
        ep.steps.push_back(std::move(tr));
        if (out.done) break;
        st = std::move(out.next_state);
    }
    return ep;
}

void fisher_yates(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i-- > 1;) {
        const std::size_t j = rng.uniform_below(i + 1);
        std::swap(idx[i], idx[j]);
    }
}

struct ActorBlock {
    // Mean-net parameters followed by log_std, as one optimizer block.
    static std::vector<double> pack(const GaussianPolicy& pol) {
        std::vector<double> flat = pol.mean_net.params;
        flat.insert(flat.end(), pol.log_std.begin(), pol.log_std.end());
        return flat;
    }
    static void unpack(const std::vector<double>& flat, GaussianPolicy& pol) {
        const std::size_t n = pol.mean_net.params.size();
        std::copy(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(n),
                  pol.mean_net.params.begin());
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(n), flat.end(),
                  pol.log_std.begin());
        pol.clamp_log_std();
    }
};

}  // namespace

TrainResult train(const EnvConfig& env_cfg, const SceneGenConfig& scene_cfg,
                  const Hyperparams& hp, std::uint64_t seed, const TrainCallbacks& callbacks) {
    hp.validate();
    env_cfg.validate();
    scene_cfg.validate();

    const std::size_t obs_dim = env_cfg.include_time_feature ? 5 : 4;
    Rng init_rng(seed);

    GaussianPolicy actor;
    {
        std::vector<std::size_t> dims{obs_dim};
        dims.insert(dims.end(), hp.hidden_dims.begin(), hp.hidden_dims.end());
        dims.push_back(kActionDim);
        actor.mean_net = Mlp::create(dims, init_rng, 0.01);
        actor.log_std.fill(hp.log_std_init);
        actor.clamp_log_std();
    }
    Mlp critic;
    {
        std::vector<std::size_t> dims{obs_dim};
        dims.insert(dims.end(), hp.hidden_dims.begin(), hp.hidden_dims.end());
        dims.push_back(1);
        critic = Mlp::create(dims, init_rng, 1.0);
    }

    AdamState actor_opt(actor.mean_net.param_count() + kActionDim, hp.lr_actor);
    AdamState critic_opt(critic.param_count(), hp.lr_critic);

    std::vector<Rng> worker_rngs;
    worker_rngs.reserve(hp.workers);
    for (std::size_t k = 0; k < hp.workers; ++k) worker_rngs.emplace_back(seed + 1 + k);
    Rng shuffle_rng(seed + 1 + hp.workers);

    const IesEnv env_proto(env_cfg, scene_cfg.base);
    const std::size_t epu = hp.effective_episodes_per_update();

    TrainResult res;
    res.log.reserve(hp.episodes_total);
    std::vector<double> ma_buffer;
    double ma_sum = 0.0;
    std::size_t episodes_done = 0;

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    while (episodes_done < hp.episodes_total) {
        const std::size_t n_eps = std::min(epu, hp.episodes_total - episodes_done);

        // Collection: slot j is rolled by worker j % workers so each worker's
        // draw sequence is independent of thread scheduling.
        std::vector<EpisodeData> episodes(n_eps);
        {
            std::vector<std::thread> threads;
            threads.reserve(hp.workers);
            for (std::size_t k = 0; k < hp.workers; ++k) {
                threads.emplace_back([&, k] {
                    for (std::size_t j = k; j < n_eps; j += hp.workers) {
                        episodes[j] = rollout_episode(env_proto, scene_cfg, actor, critic,
                                                      worker_rngs[k]);
                    }
                });
            }
            for (auto& th : threads) th.join();
        }

        // Pool the round's transitions in slot order.
        std::vector<const Transition*> batch;
        std::vector<double> returns;
        for (const EpisodeData& ep : episodes) {
            std::vector<double> rewards(ep.steps.size());
            for (std::size_t i = 0; i < ep.steps.size(); ++i) rewards[i] = ep.steps[i].reward;
            const std::vector<double> ep_ret = compute_returns(rewards, hp.gamma);
            returns.insert(returns.end(), ep_ret.begin(), ep_ret.end());
            for (const Transition& tr : ep.steps) batch.push_back(&tr);
        }
        std::vector<double> values(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) values[i] = batch[i]->value;
        std::vector<double> adv = raw_advantages(returns, values);
        normalize_advantages(adv);

        const std::size_t n = batch.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);

        double round_actor_loss = 0.0;
        double round_critic_loss = 0.0;

        std::vector<double> actor_grad(actor_opt.m.size());
        std::vector<double> mean_grad(actor.mean_net.param_count());
        std::vector<double> critic_grad(critic_opt.m.size());
        ForwardTrace trace;

        for (std::size_t epoch = 0; epoch < hp.epochs_per_update; ++epoch) {
            fisher_yates(order, shuffle_rng);
            double epoch_actor_loss = 0.0;
            double epoch_critic_loss = 0.0;
            std::size_t epoch_count = 0;

            for (std::size_t start = 0; start < n; start += hp.minibatch) {
                const std::size_t stop = std::min(start + hp.minibatch, n);
                const double m = static_cast<double>(stop - start);
                std::fill(mean_grad.begin(), mean_grad.end(), 0.0);
                std::fill(critic_grad.begin(), critic_grad.end(), 0.0);
                double batch_actor_loss = 0.0;
                double batch_critic_loss = 0.0;

                std::array<double, kActionDim> grad_log_std{};
                for (std::size_t pos = start; pos < stop; ++pos) {
                    const std::size_t i = order[pos];
                    const Transition& tr = *batch[i];
                    const double a = adv[i];

                    forward(actor.mean_net, tr.obs, trace);
                    const double new_lp = policy_log_prob(actor, trace.output, tr.action);
                    const double ratio = ppo_ratio(new_lp, tr.log_prob);
                    const double unclipped = ratio * a;
                    const double clipped =
                        std::clamp(ratio, 1.0 - hp.clip_eps, 1.0 + hp.clip_eps) * a;
                    batch_actor_loss -= std::min(unclipped, clipped) / m;
                    if (unclipped <= clipped) {
                        policy_log_prob_backward(actor, trace, tr.action, -a * ratio / m,
                                                 mean_grad, grad_log_std);
                    }

                    forward(critic, tr.obs, trace);
                    const double err = trace.output[0] - returns[i];
                    batch_critic_loss += err * err / m;
                    const std::vector<double> upstream{2.0 * err / m};
                    backward(critic, trace, upstream, critic_grad);
                }
                std::copy(mean_grad.begin(), mean_grad.end(), actor_grad.begin());
                std::copy(grad_log_std.begin(), grad_log_std.end(),
                          actor_grad.end() - static_cast<std::ptrdiff_t>(kActionDim));

                if (!std::isfinite(batch_actor_loss) || !std::isfinite(batch_critic_loss)) {
                    throw TrainingError("non-finite loss after " + std::to_string(episodes_done) +
                                        " episodes (actor=" + std::to_string(batch_actor_loss) +
                                        ", critic=" + std::to_string(batch_critic_loss) + ")");
                }

                std::vector<double> actor_params = ActorBlock::pack(actor);
                if (!adam_step(actor_params, actor_grad, actor_opt)) {
                    throw TrainingError("non-finite actor gradient after " +
                                        std::to_string(episodes_done) + " episodes");
                }
                ActorBlock::unpack(actor_params, actor);
                if (!adam_step(critic.params, critic_grad, critic_opt)) {
                    throw TrainingError("non-finite critic gradient after " +
                                        std::to_string(episodes_done) + " episodes");
                }

                epoch_actor_loss += batch_actor_loss * m;
                epoch_critic_loss += batch_critic_loss * m;
                epoch_count += stop - start;
            }
            round_actor_loss = epoch_actor_loss / static_cast<double>(epoch_count);
            round_critic_loss = epoch_critic_loss / static_cast<double>(epoch_count);
        }

        const double now = elapsed();
        for (const EpisodeData& ep : episodes) {
            ++episodes_done;
            ma_buffer.push_back(ep.total_reward);
            ma_sum += ep.total_reward;
            if (ma_buffer.size() > hp.ma_window) {
                ma_sum -= ma_buffer[ma_buffer.size() - hp.ma_window - 1];
            }
            const std::size_t win = std::min(ma_buffer.size(), hp.ma_window);
            TrainLogRow row;
            row.episode = episodes_done;
            row.reward = ep.total_reward;
            row.ma_reward = ma_sum / static_cast<double>(win);
            row.actor_loss = round_actor_loss;
            row.critic_loss = round_critic_loss;
            row.seconds = now;
            res.log.push_back(row);
            if (callbacks.on_episode) callbacks.on_episode(row);
        }
    }

    res.train_seconds = elapsed();
    res.checkpoint.actor = actor;
    res.checkpoint.critic = critic;
    res.checkpoint.actor_opt = actor_opt;
    res.checkpoint.critic_opt = critic_opt;
    res.checkpoint.train_seconds = res.train_seconds;
    res.checkpoint.episodes = static_cast<long>(episodes_done);
    return res;
}

ConvergenceReport assess_convergence(const std::vector<TrainLogRow>& log,
                                     std::size_t ma_window) {
    ConvergenceReport rep;
    if (log.empty() || ma_window == 0) return rep;
    const std::size_t n = log.size();
    std::vector<double> ma(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += log[i].reward;
        if (i >= ma_window) acc -= log[i - ma_window].reward;
        ma[i] = acc / static_cast<double>(std::min(i + 1, ma_window));
    }
    const std::size_t decile = std::max<std::size_t>(1, n / 10);
    double first = 0.0;
    for (std::size_t i = 0; i < decile; ++i) first += ma[i];
    first /= static_cast<double>(decile);
    double last = 0.0;
    double last_max = ma[n - decile];
    for (std::size_t i = n - decile; i < n; ++i) {
        last += ma[i];
        last_max = std::max(last_max, ma[i]);
    }
    last /= static_cast<double>(decile);
    rep.first_decile_avg = first;
    rep.final_decile_avg = last;
    rep.final_decile_max = last_max;
    rep.improved = last > first;
    rep.plateau = (last_max - last) <= 0.15 * std::abs(last_max) + 1e-12;
    return rep;
}

EpisodeEval evaluate_policy(const IesEnv& env, const GaussianPolicy& actor) {
    EpisodeEval ev;
    ev.steps.reserve(env.periods());
    EnvState st = env.reset();
    while (true) {
        const std::vector<double> mean = forward(actor.mean_net, st.obs);
        std::array<double, kActionDim> action{};
        for (std::size_t i = 0; i < kActionDim; ++i) action[i] = std::clamp(mean[i], -1.0, 1.0);
        StepOutcome out = env.step(st, action);
        ev.total_reward += out.reward;
        ev.total_cost += out.info.cost_total;
        ev.total_imbalance += out.info.imbalance_d;
        ev.steps.push_back(out.info);
        if (out.done) break;
        st = std::move(out.next_state);
    }
    return ev;
}

}  // namespace ies
