#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fmcit/data_matrix.hpp"
#include "fmcit/mlp.hpp"

namespace fmcit {

struct FmTrainConfig {
    int epochs = 200;
    int batch_size = 1024;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    bool standardize = true;
    int hidden_width = 256;
    int hidden_layers = 2;
    Activation activation = Activation::Silu;
};

/// Trained vector field with the standardization of its training data.
/// Immutable after training; safe to share across concurrent CI queries.
struct VectorFieldModel {
    MlpParams params;
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
    std::vector<double> train_loss_history;  // per-epoch mean loss
    int p = 0;
};

/// Time grid 0 = t_0 < t_1 < ... < t_L = 1, plus the number of harmonization
/// sweeps the sampler performs per grid point before advancing. Extra sweeps
/// sharpen the conditional coupling when the field is near-exact, but they
/// also compound any field error (each sweep pushes the state toward the
/// model's self-consistent endpoint), so the default is a single sweep.
struct SamplingSchedule {
    std::vector<double> grid;
    int harmonize = 1;

    int steps() const { return static_cast<int>(grid.size()) - 1; }
    static SamplingSchedule uniform(int steps);
    void validate() const;
};

/// Regress v(X(t), t) onto X(1) - X(0) over noisy interpolants
/// X(t) = t X(1) + (1-t) X(0), X(0) ~ N(0, I). Deterministic given cfg.seed.
VectorFieldModel train_flow_matching(const DataMatrix& data, const FmTrainConfig& cfg);

/// Picard extrapolation with RePaint re-noising. Each sweep draws a one-jump
/// estimate of X(1) given the current state X(t): the extrapolation
/// X + (1-t) v plus (1-t)-scaled Gaussian noise, so the estimate carries the
/// jump's own uncertainty instead of collapsing onto the conditional mean
/// (the spread of X(1) around the extrapolation is exactly (1-t) per
/// coordinate for unit-variance Gaussian data as t -> 1). The sweep then
/// overwrites the conditioning columns and re-noises back onto the
/// interpolation path. Extrapolating the mean alone looks similar but
/// provably halves the conditional variance in the limit, which ruins the
/// resampling null downstream.
///
/// conditioning_values are in raw data units (standardized internally with the
/// model's train statistics); the returned matrix is de-standardized and its
/// S-columns equal the conditioning input up to the standardization round trip.
///
/// Noise is keyed by (seed, draw, row_offset + row, col), so imputing a batch
/// equals imputing any partition of it with matching offsets.
Eigen::MatrixXd picard_repaint_impute(const VectorFieldModel& model,
                                      const Eigen::MatrixXd& conditioning_values,
                                      const std::vector<int>& conditioning_indices,
                                      const SamplingSchedule& schedule, std::uint64_t seed,
                                      std::int64_t row_offset = 0);

/// Conditional resampler behind the CRT. The flow-matching model is the
/// production implementation; tests plug in exact conditional laws.
class ConditionalSampler {
  public:
    virtual ~ConditionalSampler() = default;
    virtual Eigen::MatrixXd impute(const Eigen::MatrixXd& conditioning_values,
                                   const std::vector<int>& conditioning_indices,
                                   std::uint64_t seed, std::int64_t row_offset) const = 0;
    virtual int dim() const = 0;
};

class FlowSampler final : public ConditionalSampler {
  public:
    FlowSampler(const VectorFieldModel& model, SamplingSchedule schedule)
        : model_(&model), schedule_(std::move(schedule)) {}

    Eigen::MatrixXd impute(const Eigen::MatrixXd& conditioning_values,
                           const std::vector<int>& conditioning_indices, std::uint64_t seed,
                           std::int64_t row_offset) const override {
        return picard_repaint_impute(*model_, conditioning_values, conditioning_indices, schedule_,
                                     seed, row_offset);
    }
    int dim() const override { return model_->p; }

  private:
    const VectorFieldModel* model_;
    SamplingSchedule schedule_;
};

/// Versioned JSON checkpoint: shapes, flat 64-bit parameters, activation tag,
/// train standardization. Round-trips losslessly.
void save_model(const VectorFieldModel& model, const std::string& path);
VectorFieldModel load_model(const std::string& path);

}  // namespace fmcit
