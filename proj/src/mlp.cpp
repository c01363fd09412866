#include "fmcit/mlp.hpp"

#include <cmath>
#include <random>

#include "fmcit/error.hpp"
#include "fmcit/rng.hpp"

namespace fmcit {

namespace {

Eigen::ArrayXXd silu(const Eigen::ArrayXXd& z) {
    return z / (1.0 + (-z).exp());
}

Eigen::ArrayXXd silu_deriv(const Eigen::ArrayXXd& z) {
    Eigen::ArrayXXd sig = 1.0 / (1.0 + (-z).exp());
    return sig * (1.0 + z * (1.0 - sig));
}

Eigen::ArrayXXd relu(const Eigen::ArrayXXd& z) {
    return z.max(0.0);
}

Eigen::ArrayXXd relu_deriv(const Eigen::ArrayXXd& z) {
    return (z > 0.0).cast<double>();
}

Eigen::MatrixXd apply_activation(Activation a, const Eigen::MatrixXd& z) {
    return a == Activation::Silu ? silu(z.array()).matrix() : relu(z.array()).matrix();
}

Eigen::MatrixXd activation_deriv(Activation a, const Eigen::MatrixXd& z) {
    return a == Activation::Silu ? silu_deriv(z.array()).matrix() : relu_deriv(z.array()).matrix();
}

Eigen::MatrixXd stack_input(const MlpParams& params, const Eigen::MatrixXd& x,
                            const Eigen::VectorXd& t) {
    if (x.rows() != t.size()) {
        throw DimensionError("mlp: batch size mismatch, x has " + std::to_string(x.rows()) +
                             " rows but t has " + std::to_string(t.size()) + " entries");
    }
    if (x.cols() + 1 != params.input_dim()) {
        throw DimensionError("mlp: input has " + std::to_string(x.cols()) +
                             " features, network expects " + std::to_string(params.input_dim() - 1));
    }
    if ((t.array() < 0.0).any() || (t.array() > 1.0).any()) {
        throw ConfigError("mlp: time coordinates must lie in [0,1]");
    }
    if (!x.allFinite()) throw DataError("mlp: non-finite input batch");
    Eigen::MatrixXd input(x.rows(), x.cols() + 1);
    input.leftCols(x.cols()) = x;
    input.col(x.cols()) = t;
    return input;
}

}  // namespace

std::string to_string(Activation a) {
    return a == Activation::Silu ? "silu" : "relu";
}

Activation activation_from_string(const std::string& s) {
    if (s == "silu") return Activation::Silu;
    if (s == "relu") return Activation::Relu;
    throw ConfigError("unknown activation '" + s + "'");
}

bool MlpParams::all_finite() const {
    for (const auto& w : weights)
        if (!w.allFinite()) return false;
    for (const auto& b : biases)
        if (!b.allFinite()) return false;
    return true;
}

MlpParams make_mlp(int input_dim, int output_dim, int hidden_width, int hidden_layers,
                   Activation activation, std::uint64_t seed) {
    if (input_dim < 1 || output_dim < 1 || hidden_width < 1 || hidden_layers < 0) {
        throw ConfigError("make_mlp: dimensions must be positive");
    }
    std::vector<int> dims;
    dims.push_back(input_dim);
    for (int k = 0; k < hidden_layers; ++k) dims.push_back(hidden_width);
    dims.push_back(output_dim);

    std::mt19937_64 rng(seed_mix(seed, 0xC0FFEEull));
    MlpParams params;
    params.activation = activation;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        const int fan_in = dims[k];
        const int fan_out = dims[k + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> unif(-bound, bound);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = unif(rng);
        params.weights.push_back(std::move(w));
        params.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return params;
}

MlpGrads zeros_like(const MlpParams& params) {
    MlpGrads g;
    for (const auto& w : params.weights) g.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    for (const auto& b : params.biases) g.biases.push_back(Eigen::VectorXd::Zero(b.size()));
    return g;
}

Eigen::MatrixXd mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x,
                            const Eigen::VectorXd& t) {
    Eigen::MatrixXd a = stack_input(params, x, t);
    const int layers = params.layer_count();
    for (int k = 0; k < layers; ++k) {
        Eigen::MatrixXd z = a * params.weights[k].transpose();
        z.rowwise() += params.biases[k].transpose();
        a = (k + 1 < layers) ? apply_activation(params.activation, z) : std::move(z);
    }
    return a;
}

Eigen::MatrixXd mlp_forward_cached(const MlpParams& params, const Eigen::MatrixXd& x,
                                   const Eigen::VectorXd& t, ForwardCache& cache) {
    cache.input = stack_input(params, x, t);
    const int layers = params.layer_count();
    cache.pre.assign(static_cast<std::size_t>(layers), {});
    cache.act.assign(static_cast<std::size_t>(layers), {});

    const Eigen::MatrixXd* a = &cache.input;
    for (int k = 0; k < layers; ++k) {
        Eigen::MatrixXd z = (*a) * params.weights[k].transpose();
        z.rowwise() += params.biases[k].transpose();
        cache.pre[static_cast<std::size_t>(k)] = std::move(z);
        if (k + 1 < layers) {
            cache.act[static_cast<std::size_t>(k)] =
                apply_activation(params.activation, cache.pre[static_cast<std::size_t>(k)]);
            a = &cache.act[static_cast<std::size_t>(k)];
        }
    }
    return cache.pre.back();
}

MlpGrads mlp_backward_cached(const MlpParams& params, const ForwardCache& cache,
                             const Eigen::MatrixXd& upstream) {
    const int layers = params.layer_count();
    if (upstream.rows() != cache.input.rows() || upstream.cols() != params.output_dim()) {
        throw DimensionError("mlp_backward: upstream gradient shape mismatch");
    }

    MlpGrads grads;
    grads.weights.resize(static_cast<std::size_t>(layers));
    grads.biases.resize(static_cast<std::size_t>(layers));

    Eigen::MatrixXd delta = upstream;  // gradient wrt pre-activation of the last layer
    for (int k = layers - 1; k >= 0; --k) {
        const Eigen::MatrixXd& below =
            (k == 0) ? cache.input : cache.act[static_cast<std::size_t>(k - 1)];
        grads.weights[static_cast<std::size_t>(k)] = delta.transpose() * below;
        grads.biases[static_cast<std::size_t>(k)] = delta.colwise().sum().transpose();
        if (!grads.weights[static_cast<std::size_t>(k)].allFinite() ||
            !grads.biases[static_cast<std::size_t>(k)].allFinite()) {
            throw TrainingError("non-finite gradient at layer " + std::to_string(k));
        }
        if (k > 0) {
            delta = (delta * params.weights[static_cast<std::size_t>(k)]).array() *
                    activation_deriv(params.activation, cache.pre[static_cast<std::size_t>(k - 1)]).array();
        }
    }
    return grads;
}

MlpGrads mlp_backward(const MlpParams& params, const Eigen::MatrixXd& x,
                      const Eigen::VectorXd& t, const Eigen::MatrixXd& upstream) {
    ForwardCache cache;
    mlp_forward_cached(params, x, t, cache);
    return mlp_backward_cached(params, cache, upstream);
}

AdamState make_adam(const MlpParams& params, double learning_rate) {
    AdamState state;
    state.first_moment = zeros_like(params);
    state.second_moment = zeros_like(params);
    state.learning_rate = learning_rate;
    return state;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
    if (grads.weights.size() != params.weights.size()) {
        throw DimensionError("adam_step: gradient/parameter layer count mismatch");
    }
    state.step_count += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

    auto update = [&](auto& theta, auto& m, auto& v, const auto& g) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = (state.beta2 * v.array() + (1.0 - state.beta2) * g.array().square()).matrix();
        theta.array() -=
            state.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
    };

    for (std::size_t k = 0; k < params.weights.size(); ++k) {
        update(params.weights[k], state.first_moment.weights[k], state.second_moment.weights[k],
               grads.weights[k]);
        update(params.biases[k], state.first_moment.biases[k], state.second_moment.biases[k],
               grads.biases[k]);
    }
    if (!params.all_finite()) {
        throw TrainingError("non-finite parameter after Adam update at step " +
                            std::to_string(state.step_count));
    }
}

}  // namespace fmcit
