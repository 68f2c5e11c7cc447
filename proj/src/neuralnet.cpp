#include "ies/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "ies/errors.hpp"

namespace ies {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * ln(2*pi)

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Modified Gram-Schmidt over n Gaussian vectors of the given dimension.
// Vectors come out orthonormal; degenerate draws are resampled.
std::vector<std::vector<double>> orthonormal_set(std::size_t n, std::size_t dim, Rng& rng) {
    std::vector<std::vector<double>> vecs(n, std::vector<double>(dim));
    for (auto& v : vecs) {
        for (double& x : v) x = rng.gaussian();
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            for (std::size_t j = 0; j < k; ++j) {
                const double proj = dot(vecs[k], vecs[j]);
                for (std::size_t i = 0; i < dim; ++i) vecs[k][i] -= proj * vecs[j][i];
            }
            const double norm = std::sqrt(dot(vecs[k], vecs[k]));
            if (norm > 1e-10) {
                for (double& x : vecs[k]) x /= norm;
                break;
            }
            for (double& x : vecs[k]) x = rng.gaussian();
        }
    }
    return vecs;
}

}  // namespace

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) n += dims[l + 1] * (dims[l] + 1);
    return n;
}

std::size_t Mlp::weight_offset(std::size_t layer) const {
    std::size_t off = 0;
    for (std::size_t l = 0; l < layer; ++l) off += dims[l + 1] * (dims[l] + 1);
    return off;
}

std::size_t Mlp::bias_offset(std::size_t layer) const {
    return weight_offset(layer) + dims[layer + 1] * dims[layer];
}

void Mlp::validate() const {
    if (dims.size() < 2) throw ConfigError("network needs at least two layer dims");
    for (std::size_t d : dims) {
        if (d == 0) throw ConfigError("network layer dims must be positive");
    }
    if (params.size() != param_count()) {
        throw ConfigError("network parameter count mismatch");
    }
    for (double p : params) {
        if (!std::isfinite(p)) throw ConfigError("network parameter is not finite");
    }
}

Mlp Mlp::create(std::vector<std::size_t> dims, Rng& rng, double final_gain) {
    Mlp net;
    net.dims = std::move(dims);
    if (net.dims.size() < 2) throw ConfigError("network needs at least two layer dims");
    net.params.assign(net.param_count(), 0.0);
    for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
        const std::size_t in = net.dims[l];
        const std::size_t out = net.dims[l + 1];
        const bool last = l + 2 == net.dims.size();
        const double gain = last ? final_gain : std::numbers::sqrt2;
        double* w = net.params.data() + net.weight_offset(l);
        if (out >= in) {
            // Tall matrix: orthonormal columns.
            auto cols = orthonormal_set(in, out, rng);
            for (std::size_t i = 0; i < out; ++i) {
                for (std::size_t j = 0; j < in; ++j) w[i * in + j] = gain * cols[j][i];
            }
        } else {
            auto rows = orthonormal_set(out, in, rng);
            for (std::size_t i = 0; i < out; ++i) {
                for (std::size_t j = 0; j < in; ++j) w[i * in + j] = gain * rows[i][j];
            }
        }
    }
    return net;
}

std::vector<double> forward(const Mlp& net, const std::vector<double>& x) {
    ForwardTrace trace;
    forward(net, x, trace);
    return trace.output;
}

void forward(const Mlp& net, const std::vector<double>& x, ForwardTrace& trace) {
    if (x.size() != net.input_dim()) throw std::invalid_argument("network input size mismatch");
    const std::size_t layers = net.layer_count();
    trace.inputs.assign(layers, {});
    std::vector<double> cur = x;
    for (std::size_t l = 0; l < layers; ++l) {
        trace.inputs[l] = cur;
        const std::size_t in = net.dims[l];
        const std::size_t out = net.dims[l + 1];
        const double* w = net.params.data() + net.weight_offset(l);
        const double* b = net.params.data() + net.bias_offset(l);
        std::vector<double> next(out);
        for (std::size_t i = 0; i < out; ++i) {
            double s = b[i];
            const double* row = w + i * in;
            for (std::size_t k = 0; k < in; ++k) s += row[k] * cur[k];
            next[i] = (l + 1 < layers) ? std::tanh(s) : s;
        }
        cur = std::move(next);
    }
    trace.output = std::move(cur);
}

void backward(const Mlp& net, const ForwardTrace& trace,
              const std::vector<double>& upstream, std::vector<double>& grad) {
    const std::size_t layers = net.layer_count();
    if (trace.inputs.size() != layers) throw std::invalid_argument("trace does not match network");
    if (upstream.size() != net.output_dim()) {
        throw std::invalid_argument("upstream gradient size mismatch");
    }
    if (grad.size() != net.param_count()) throw std::invalid_argument("gradient size mismatch");

    // delta holds d(loss)/d(pre-activation) of the current layer.
    std::vector<double> delta = upstream;
    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t in = net.dims[l];
        const std::size_t out = net.dims[l + 1];
        const double* w = net.params.data() + net.weight_offset(l);
        const std::vector<double>& layer_in = trace.inputs[l];
        double* gw = grad.data() + net.weight_offset(l);
        double* gb = grad.data() + net.bias_offset(l);
        for (std::size_t i = 0; i < out; ++i) {
            const double d = delta[i];
            double* grow = gw + i * in;
            for (std::size_t k = 0; k < in; ++k) grow[k] += d * layer_in[k];
            gb[i] += d;
        }
        if (l == 0) break;
        std::vector<double> prev(in, 0.0);
        for (std::size_t k = 0; k < in; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < out; ++i) s += w[i * in + k] * delta[i];
            // layer_in is the previous layer's tanh output.
            prev[k] = s * (1.0 - layer_in[k] * layer_in[k]);
        }
        delta = std::move(prev);
    }
}

std::array<double, kActionDim> GaussianPolicy::stds() const {
    std::array<double, kActionDim> s{};
    for (std::size_t i = 0; i < kActionDim; ++i) {
        s[i] = std::exp(std::clamp(log_std[i], kLogStdMin, kLogStdMax));
    }
    return s;
}

void GaussianPolicy::clamp_log_std() {
    for (double& v : log_std) v = std::clamp(v, kLogStdMin, kLogStdMax);
}

double policy_log_prob(const GaussianPolicy& pol, const std::vector<double>& mean,
                       const std::array<double, kActionDim>& action) {
    if (mean.size() != kActionDim) throw std::invalid_argument("policy mean size mismatch");
    const std::array<double, kActionDim> sd = pol.stds();
    double lp = 0.0;
    for (std::size_t i = 0; i < kActionDim; ++i) {
        const double z = (action[i] - mean[i]) / sd[i];
        lp += -0.5 * z * z - std::log(sd[i]) - kHalfLog2Pi;
    }
    return lp;
}

void policy_log_prob_backward(const GaussianPolicy& pol, const ForwardTrace& trace,
                              const std::array<double, kActionDim>& action, double coeff,
                              std::vector<double>& grad_mean,
                              std::array<double, kActionDim>& grad_log_std) {
    const std::array<double, kActionDim> sd = pol.stds();
    const std::vector<double>& mean = trace.output;
    if (mean.size() != kActionDim) throw std::invalid_argument("trace output size mismatch");
    std::vector<double> upstream(kActionDim);
    for (std::size_t i = 0; i < kActionDim; ++i) {
        const double z = (action[i] - mean[i]) / sd[i];
        upstream[i] = coeff * z / sd[i];
        grad_log_std[i] += coeff * (z * z - 1.0);
    }
    backward(pol.mean_net, trace, upstream, grad_mean);
}

PolicySample policy_sample(const GaussianPolicy& pol, const std::vector<double>& obs, Rng& rng) {
    const std::vector<double> mean = forward(pol.mean_net, obs);
    const std::array<double, kActionDim> sd = pol.stds();
    PolicySample out;
    std::array<double, kActionDim> raw{};
    for (std::size_t i = 0; i < kActionDim; ++i) {
        raw[i] = mean[i] + sd[i] * rng.gaussian();
    }
    out.log_prob = policy_log_prob(pol, mean, raw);
    for (std::size_t i = 0; i < kActionDim; ++i) {
        out.action[i] = std::clamp(raw[i], -1.0, 1.0);
    }
    return out;
}

bool adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state) {
    if (grad.size() != params.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw std::invalid_argument("optimizer state size mismatch");
    }
    for (double g : grad) {
        if (!std::isfinite(g)) return false;
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
    return true;
}

namespace {

using nlohmann::json;

json adam_to_json(const AdamState& s) {
    return json{{"lr", s.lr},   {"beta1", s.beta1}, {"beta2", s.beta2},
                {"eps", s.eps}, {"step", s.step},   {"m", s.m},
                {"v", s.v}};
}

AdamState adam_from_json(const json& j) {
    AdamState s;
    s.lr = j.at("lr").get<double>();
    s.beta1 = j.at("beta1").get<double>();
    s.beta2 = j.at("beta2").get<double>();
    s.eps = j.at("eps").get<double>();
    s.step = j.at("step").get<long>();
    s.m = j.at("m").get<std::vector<double>>();
    s.v = j.at("v").get<std::vector<double>>();
    if (s.m.size() != s.v.size()) throw ConfigError("checkpoint optimizer moments differ in size");
    return s;
}

json mlp_to_json(const Mlp& net) {
    return json{{"layer_dims", net.dims}, {"weights", net.params}};
}

Mlp mlp_from_json(const json& j) {
    Mlp net;
    net.dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    net.params = j.at("weights").get<std::vector<double>>();
    net.validate();
    return net;
}

}  // namespace

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
    json j;
    j["format"] = "ies-checkpoint";
    j["version"] = 1;
    j["actor"] = mlp_to_json(cp.actor.mean_net);
    j["actor"]["log_std"] = cp.actor.log_std;
    j["critic"] = mlp_to_json(cp.critic);
    if (cp.actor_opt) j["optimizer"]["actor"] = adam_to_json(*cp.actor_opt);
    if (cp.critic_opt) j["optimizer"]["critic"] = adam_to_json(*cp.critic_opt);
    j["meta"] = json{{"train_seconds", cp.train_seconds}, {"episodes", cp.episodes}};
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write checkpoint '" + path + "'");
    out << j.dump() << "\n";
    if (!out) throw ConfigError("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "ies-checkpoint") {
            throw ConfigError("'" + path + "' is not a checkpoint file");
        }
        if (j.at("version").get<int>() != 1) {
            throw ConfigError("unsupported checkpoint version in '" + path + "'");
        }
        Checkpoint cp;
        cp.actor.mean_net = mlp_from_json(j.at("actor"));
        const auto ls = j.at("actor").at("log_std").get<std::vector<double>>();
        if (ls.size() != kActionDim) throw ConfigError("checkpoint log_std has wrong size");
        std::copy(ls.begin(), ls.end(), cp.actor.log_std.begin());
        cp.critic = mlp_from_json(j.at("critic"));
        if (j.contains("optimizer")) {
            const json& opt = j.at("optimizer");
            if (opt.contains("actor")) cp.actor_opt = adam_from_json(opt.at("actor"));
            if (opt.contains("critic")) cp.critic_opt = adam_from_json(opt.at("critic"));
        }
        if (j.contains("meta")) {
            cp.train_seconds = j.at("meta").value("train_seconds", 0.0);
            cp.episodes = j.at("meta").value("episodes", 0L);
        }
        return cp;
    } catch (const json::exception& e) {
        throw ConfigError("checkpoint '" + path + "' is malformed: " + e.what());
    }
}

}  // namespace ies
