#include "fmcit/flow_matching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "fmcit/error.hpp"
#include "fmcit/rng.hpp"
#include "json.hpp"

namespace fmcit {

SamplingSchedule SamplingSchedule::uniform(int steps) {
    if (steps < 1) throw ConfigError("sampling schedule needs at least 1 step");
    SamplingSchedule s;
    s.grid.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) s.grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / steps;
    s.grid.front() = 0.0;
    s.grid.back() = 1.0;
    return s;
}

void SamplingSchedule::validate() const {
    if (grid.size() < 2) throw ConfigError("sampling schedule needs at least 1 step");
    if (grid.front() != 0.0 || grid.back() != 1.0) {
        throw ConfigError("sampling schedule must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ConfigError("sampling schedule must be strictly increasing");
    }
    if (harmonize < 1) throw ConfigError("sampling schedule needs at least 1 harmonization sweep");
}

VectorFieldModel train_flow_matching(const DataMatrix& data, const FmTrainConfig& cfg) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    if (cfg.epochs < 1) throw ConfigError("train_flow_matching: epochs must be >= 1");
    if (cfg.batch_size < 1) throw ConfigError("train_flow_matching: batch_size must be >= 1");
    if (n < 2 || p < 1) throw ConfigError("train_flow_matching: need n >= 2 and p >= 1");
    if (!data.values.allFinite()) throw DataError("train_flow_matching: non-finite data");

    VectorFieldModel model;
    model.p = static_cast<int>(p);
    if (cfg.standardize) {
        Standardization st = compute_standardization(data);
        model.mean = std::move(st.mean);
        model.std = std::move(st.std);
    } else {
        model.mean = Eigen::VectorXd::Zero(p);
        model.std = Eigen::VectorXd::Ones(p);
    }
    Eigen::MatrixXd xs = (data.values.rowwise() - model.mean.transpose()).array().rowwise() /
                         model.std.transpose().array();

    model.params = make_mlp(static_cast<int>(p) + 1, static_cast<int>(p), cfg.hidden_width,
                            cfg.hidden_layers, cfg.activation, seed_mix(cfg.seed, 0x1717ull));
    AdamState adam = make_adam(model.params, cfg.learning_rate);

    std::mt19937_64 rng(seed_mix(cfg.seed, 0x7A41ull));
    std::uniform_real_distribution<double> unif01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    MlpParams best_params = model.params;
    double best_loss = std::numeric_limits<double>::infinity();

    ForwardCache cache;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        Eigen::Index seen = 0;
        int batch_index = 0;
        for (Eigen::Index start = 0; start < n; start += cfg.batch_size, ++batch_index) {
            const Eigen::Index b = std::min<Eigen::Index>(cfg.batch_size, n - start);

            Eigen::MatrixXd x1(b, p);
            for (Eigen::Index r = 0; r < b; ++r) x1.row(r) = xs.row(order[static_cast<std::size_t>(start + r)]);

            Eigen::VectorXd t(b);
            for (Eigen::Index r = 0; r < b; ++r) t(r) = unif01(rng);
            Eigen::MatrixXd x0(b, p);
            for (Eigen::Index r = 0; r < b; ++r)
                for (Eigen::Index c = 0; c < p; ++c) x0(r, c) = gauss(rng);

            Eigen::MatrixXd xt =
                (x1.array().colwise() * t.array() + x0.array().colwise() * (1.0 - t.array())).matrix();
            Eigen::MatrixXd target = x1 - x0;

            Eigen::MatrixXd pred = mlp_forward_cached(model.params, xt, t, cache);
            Eigen::MatrixXd diff = pred - target;
            const double denom = static_cast<double>(b) * static_cast<double>(p);
            const double loss = diff.squaredNorm() / denom;
            if (!std::isfinite(loss)) {
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                    std::to_string(batch_index));
            }

            Eigen::MatrixXd upstream = (2.0 / denom) * diff;
            MlpGrads grads = mlp_backward_cached(model.params, cache, upstream);
            adam_step(model.params, grads, adam);

            epoch_loss += loss * static_cast<double>(b);
            seen += b;
        }
        epoch_loss /= static_cast<double>(seen);
        model.train_loss_history.push_back(epoch_loss);
        if (epoch_loss < best_loss) {
            best_loss = epoch_loss;
            best_params = model.params;
        }
    }
    // keep the epoch with the smallest training loss
    model.params = std::move(best_params);
    return model;
}

Eigen::MatrixXd picard_repaint_impute(const VectorFieldModel& model,
                                      const Eigen::MatrixXd& conditioning_values,
                                      const std::vector<int>& conditioning_indices,
                                      const SamplingSchedule& schedule, std::uint64_t seed,
                                      std::int64_t row_offset) {
    schedule.validate();
    const Eigen::Index m = conditioning_values.rows();
    const int p = model.p;
    const int L = schedule.steps();
    if (conditioning_values.cols() != static_cast<Eigen::Index>(conditioning_indices.size())) {
        throw DimensionError("impute: conditioning values/indices size mismatch");
    }
    for (int idx : conditioning_indices) {
        if (idx < 0 || idx >= p) {
            throw DimensionError("impute: conditioning index " + std::to_string(idx) +
                                 " out of range for dimension " + std::to_string(p));
        }
    }
    if (!conditioning_values.allFinite()) throw DataError("impute: non-finite conditioning values");

    // standardize conditioning values with train statistics
    Eigen::MatrixXd cond(m, conditioning_values.cols());
    for (Eigen::Index c = 0; c < cond.cols(); ++c) {
        const int col = conditioning_indices[static_cast<std::size_t>(c)];
        cond.col(c) = (conditioning_values.col(c).array() - model.mean(col)) / model.std(col);
    }

    auto fill_noise = [&](Eigen::MatrixXd& out, std::uint64_t draw) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            const auto row_key = static_cast<std::uint64_t>(row_offset + r);
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                out(r, c) = counter_normal(seed, draw, row_key, static_cast<std::uint64_t>(c));
            }
        }
    };

    Eigen::MatrixXd x(m, p);
    fill_noise(x, 0);

    const int reps = schedule.harmonize;
    Eigen::MatrixXd x_hat;
    Eigen::VectorXd t_vec(m);
    Eigen::MatrixXd eps(m, p);
    for (int i = 0; i < L; ++i) {
        const double ti = schedule.grid[static_cast<std::size_t>(i)];
        const double si = 1.0 - ti;
        t_vec.setConstant(ti);
        for (int r = 0; r < reps; ++r) {
            const auto sweep = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(reps) +
                               static_cast<std::uint64_t>(r);
            // one-jump estimate of X(1) with its own (1-t)-scaled spread; the
            // bare mean extrapolation would halve the conditional variance
            fill_noise(eps, 1 + 2 * sweep);
            x_hat = x + si * (mlp_forward(model.params, x, t_vec) + eps);
            for (Eigen::Index c = 0; c < cond.cols(); ++c) {
                x_hat.col(conditioning_indices[static_cast<std::size_t>(c)]) = cond.col(c);
            }
            const bool last_rep = (r == reps - 1);
            if (i == L - 1 && last_rep) break;
            // advance on the last sweep, otherwise re-noise back to the same grid point
            const double tn = last_rep ? schedule.grid[static_cast<std::size_t>(i) + 1] : ti;
            fill_noise(eps, 2 + 2 * sweep);
            x = tn * x_hat + (1.0 - tn) * eps;
        }
    }

    // de-standardize
    Eigen::MatrixXd out = (x_hat.array().rowwise() * model.std.transpose().array()).matrix();
    out.rowwise() += model.mean.transpose();
    return out;
}

namespace {
constexpr int kCheckpointVersion = 1;
}

void save_model(const VectorFieldModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "fmcit-vector-field";
    j["version"] = kCheckpointVersion;
    j["p"] = model.p;
    j["activation"] = to_string(model.params.activation);
    j["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
    j["std"] = std::vector<double>(model.std.data(), model.std.data() + model.std.size());
    j["loss_history"] = model.train_loss_history;

    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t k = 0; k < model.params.weights.size(); ++k) {
        const auto& w = model.params.weights[k];
        const auto& b = model.params.biases[k];
        nlohmann::json layer;
        layer["rows"] = w.rows();
        layer["cols"] = w.cols();
        std::vector<double> flat(static_cast<std::size_t>(w.size()));
        Eigen::Map<Eigen::MatrixXd>(flat.data(), w.rows(), w.cols()) = w;
        layer["weights"] = flat;
        layer["bias"] = std::vector<double>(b.data(), b.data() + b.size());
        layers.push_back(std::move(layer));
    }
    j["layers"] = std::move(layers);

    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << j.dump();
}

VectorFieldModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model checkpoint '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", "") != "fmcit-vector-field") {
        throw DataError("'" + path + "' is not a vector-field checkpoint");
    }
    if (j.value("version", -1) != kCheckpointVersion) {
        throw DataError("unsupported checkpoint version in '" + path + "'");
    }

    VectorFieldModel model;
    model.p = j.at("p").get<int>();
    model.params.activation = activation_from_string(j.at("activation").get<std::string>());
    auto mean = j.at("mean").get<std::vector<double>>();
    auto stdv = j.at("std").get<std::vector<double>>();
    model.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    model.std = Eigen::Map<Eigen::VectorXd>(stdv.data(), static_cast<Eigen::Index>(stdv.size()));
    model.train_loss_history = j.value("loss_history", std::vector<double>{});

    for (const auto& layer : j.at("layers")) {
        const auto rows = layer.at("rows").get<Eigen::Index>();
        const auto cols = layer.at("cols").get<Eigen::Index>();
        auto flat = layer.at("weights").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
            throw DataError("checkpoint layer size mismatch in '" + path + "'");
        }
        model.params.weights.emplace_back(Eigen::Map<Eigen::MatrixXd>(flat.data(), rows, cols));
        auto bias = layer.at("bias").get<std::vector<double>>();
        model.params.biases.emplace_back(
            Eigen::Map<Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size())));
    }
    if (model.params.weights.empty()) throw DataError("checkpoint has no layers");
    return model;
}

}  // namespace fmcit
