#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmcit/data_matrix.hpp"
#include "fmcit/flow_matching.hpp"

namespace fmcit {

struct RdcConfig {
    int k = 10;          // random sine features per block
    double s = 1.0 / 3;  // projection scale
    int n_rep = 1;       // repetitions; the maximum is reported
    std::uint64_t seed = 0;
};

/// Randomized dependence coefficient in [0,1]: copula-transform both inputs,
/// project through seeded random sine features, return the largest canonical
/// correlation between the feature blocks. 0 for constant inputs.
double rdc(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const RdcConfig& cfg);

/// |Pearson correlation|; 0 when either vector is constant.
double abs_corr(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct FisherZOutcome {
    double p_value = 1.0;
    double statistic = 0.0;
    double partial_corr = 0.0;
    bool degenerate = false;  // singular conditioning set; p forced to 1
};

/// Fisher-Z partial-correlation test of column i vs j given columns S.
FisherZOutcome fisher_z_test(const DataMatrix& data, int i, int j, const std::vector<int>& S);

/// CRT p-value (1 + #{resampled >= observed}) / (1 + B).
double crt_p_value(double observed, const std::vector<double>& resampled);

enum class Statistic { Rdc, AbsCorr, RdcShuffled };

std::string to_string(Statistic s);
Statistic statistic_from_string(const std::string& s);

struct CITOutcome {
    double p_value = 1.0;
    double statistic_observed = 0.0;
    std::vector<double> statistic_resampled;
    int B = 0;
    double elapsed_seconds = 0.0;
};

/// JSON record with all fields, for audit logs.
std::string cit_outcome_to_json(const CITOutcome& outcome);

struct FmcitOptions {
    int B = 100;
    Statistic statistic = Statistic::Rdc;
    RdcConfig rdc;  // seed field is ignored; the projection seed derives from `seed`
    SamplingSchedule schedule = SamplingSchedule::uniform(50);
    std::uint64_t seed = 0;
    // When set, rows [0, floor(ratio*n)) are the train part and the statistic
    // is evaluated on the remaining test rows only.
    std::optional<double> train_test_split;
    // CRT batches larger than this are imputed in chunks; results are
    // identical either way because noise is keyed by global row id.
    Eigen::Index max_rows_per_chunk = 1 << 16;
};

/// CRT driver: tile the test rows' X_S values B times, impute the batch
/// once, split into B resample sets, compare statistics via crt_p_value.
CITOutcome fmcit(const DataMatrix& data, const VectorFieldModel& model, int i, int j,
                 const std::vector<int>& S, const FmcitOptions& opt);

/// Same procedure with an arbitrary conditional resampler (exact-law oracles
/// in tests, the flow sampler in production).
CITOutcome fmcit_with_sampler(const DataMatrix& data, const ConditionalSampler& sampler, int i,
                              int j, const std::vector<int>& S, const FmcitOptions& opt);

}  // namespace fmcit
