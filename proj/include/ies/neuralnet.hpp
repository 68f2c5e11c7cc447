#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ies/rng.hpp"

namespace ies {

/// Fully connected network with tanh hidden activations and identity output.
/// Parameters live in one flat vector, per layer: weight matrix (out x in,
/// row-major) followed by the bias vector. Summation order in forward and
/// backward is fixed so results are bit-stable for a given parameter vector.
struct Mlp {
    std::vector<std::size_t> dims;
    std::vector<double> params;

    std::size_t layer_count() const { return dims.empty() ? 0 : dims.size() - 1; }
    std::size_t input_dim() const { return dims.front(); }
    std::size_t output_dim() const { return dims.back(); }
    std::size_t param_count() const;
    std::size_t weight_offset(std::size_t layer) const;
    std::size_t bias_offset(std::size_t layer) const;

    /// Gaussian matrices orthonormalized per layer, scaled by sqrt(2) on
    /// hidden layers and by final_gain on the output layer; zero biases.
    static Mlp create(std::vector<std::size_t> dims, Rng& rng, double final_gain = 1.0);

    void validate() const;
};

/// Per-layer intermediate values kept for the backward pass.
struct ForwardTrace {
    std::vector<std::vector<double>> inputs;  ///< inputs[l] is layer l's input
    std::vector<double> output;
};

std::vector<double> forward(const Mlp& net, const std::vector<double>& x);
void forward(const Mlp& net, const std::vector<double>& x, ForwardTrace& trace);

/// Accumulates d(output . upstream)/d(params) into grad (size param_count).
void backward(const Mlp& net, const ForwardTrace& trace,
              const std::vector<double>& upstream, std::vector<double>& grad);

inline constexpr std::size_t kActionDim = 6;
inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

/// Diagonal Gaussian policy: state-dependent mean, state-independent log-std.
struct GaussianPolicy {
    Mlp mean_net;
    std::array<double, kActionDim> log_std{};

    std::array<double, kActionDim> stds() const;
    void clamp_log_std();
};

struct PolicySample {
    std::array<double, kActionDim> action{};  ///< clipped to [-1, 1]
    double log_prob = 0.0;                    ///< density of the pre-clip draw
};

double policy_log_prob(const GaussianPolicy& pol, const std::vector<double>& mean,
                       const std::array<double, kActionDim>& action);

/// Accumulates coeff * d(log_prob)/d(mean-net params) into grad_mean and
/// coeff * d(log_prob)/d(log_std) into grad_log_std. The trace must come from
/// a forward pass of pol.mean_net on the sample's observation.
void policy_log_prob_backward(const GaussianPolicy& pol, const ForwardTrace& trace,
                              const std::array<double, kActionDim>& action, double coeff,
                              std::vector<double>& grad_mean,
                              std::array<double, kActionDim>& grad_log_std);

PolicySample policy_sample(const GaussianPolicy& pol, const std::vector<double>& obs, Rng& rng);

/// Bias-corrected adaptive moment optimizer state over a flat parameter block.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;

    explicit AdamState(std::size_t n = 0, double lr_ = 1e-3)
        : lr(lr_), m(n, 0.0), v(n, 0.0) {}
};

/// One descent step. Returns false and leaves params untouched when any
/// gradient entry is non-finite.
bool adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state);

/// Serialized agent: actor, critic, optional optimizer state, run metadata.
struct Checkpoint {
    GaussianPolicy actor;
    Mlp critic;
    std::optional<AdamState> actor_opt;
    std::optional<AdamState> critic_opt;
    double train_seconds = 0.0;
    long episodes = 0;
};

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ies
