#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace fmcit {

enum class Activation { Silu, Relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Feed-forward net parameters. weights[k] is (out x in); hidden layers use
/// `activation`, the output layer is linear. The input is the data vector
/// with the scalar time coordinate appended, so input_dim == output_dim + 1.
struct MlpParams {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Activation activation = Activation::Silu;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return static_cast<int>(weights.front().cols()); }
    int output_dim() const { return static_cast<int>(weights.back().rows()); }

    bool all_finite() const;
};

/// Kaiming-uniform fan-in init (biases zero), deterministic for a seed.
MlpParams make_mlp(int input_dim, int output_dim, int hidden_width, int hidden_layers,
                   Activation activation, std::uint64_t seed);

/// Parameter-shaped tensors (gradients, optimizer moments).
struct MlpGrads {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

MlpGrads zeros_like(const MlpParams& params);

/// Batched forward pass: x is (b x p), t is length b, result is (b x p).
Eigen::MatrixXd mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x,
                            const Eigen::VectorXd& t);

/// Activations kept around for the backward pass.
struct ForwardCache {
    Eigen::MatrixXd input;                 // (b x input_dim)
    std::vector<Eigen::MatrixXd> pre;      // pre-activations per layer
    std::vector<Eigen::MatrixXd> act;      // post-activations per hidden layer
};

Eigen::MatrixXd mlp_forward_cached(const MlpParams& params, const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& t, ForwardCache& cache);

/// Gradients of sum(upstream .* output) with respect to every parameter.
MlpGrads mlp_backward_cached(const MlpParams& params, const ForwardCache& cache,
                             const Eigen::MatrixXd& upstream);

MlpGrads mlp_backward(const MlpParams& params, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& t, const Eigen::MatrixXd& upstream);

struct AdamState {
    MlpGrads first_moment;
    MlpGrads second_moment;
    long step_count = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

AdamState make_adam(const MlpParams& params, double learning_rate = 1e-3);

/// Standard Adam update with bias correction; increments step_count.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

}  // namespace fmcit
