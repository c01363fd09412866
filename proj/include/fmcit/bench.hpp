#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fmcit/flow_matching.hpp"
#include "fmcit/gpc.hpp"
#include "fmcit/metrics.hpp"
#include "fmcit/stats.hpp"

namespace fmcit {

// ---- conditional-independence benchmark ------------------------------------

struct CitBenchRunConfig {
    std::vector<int> d_z_values = {10};
    std::vector<double> scales = {0.50, 0.75, 1.00};
    Eigen::Index n = 1000;
    int replications = 100;
    double alpha = 0.05;
    // "fmcit", "fmcit_shuffled", "fisher_z", or "const:<p>"
    std::vector<std::string> methods = {"fmcit"};
    std::uint64_t seed = 0;
    FmTrainConfig fm;        // seed field ignored; per-trial seeds derive inside
    int B = 100;             // CRT repeats
    int sampling_steps = 50; // imputation grid length
    int harmonize = 1;       // sampler sweeps per grid point
    double train_ratio = 0.5;
    std::string output_dir;  // empty: nothing written
};

struct CitCell {
    int d_z = 0;
    double scale = 0.0;
    std::string method;
    double type1_error = 0.0;
    double power = 0.0;
    double mean_runtime_seconds = 0.0;
};

struct CitTrialRow {
    int d_z = 0;
    double scale = 0.0;
    std::string method;
    bool alternative = false;
    int trial = 0;
    std::uint64_t seed = 0;
    double p_value = 1.0;
    bool reject = false;
    double runtime_seconds = 0.0;
};

struct CitBenchResult {
    std::vector<CitCell> cells;
    std::vector<CitTrialRow> trials;
};

/// Rejection rates over fresh H0/H1 datasets per (d_z, s, method) cell;
/// rejects when p <= alpha. Writes results.csv (deterministic), trials.jsonl
/// and timings.csv (carry wall-clock) when output_dir is set.
CitBenchResult run_cit_benchmark(const CitBenchRunConfig& cfg);

std::string cit_table_text(const CitBenchResult& result);

// ---- causal-discovery benchmark ---------------------------------------------

struct SemBenchRunConfig {
    int p = 30;
    int exp_edges = 45;
    Eigen::Index n = 500;
    double noise_df = 3.0;
    int runs = 5;  // run r uses seed base_seed + r
    // "fisherz_pc", "gpc_fmcit", "oracle_pc"
    std::vector<std::string> methods = {"fisherz_pc", "gpc_fmcit"};
    double fisherz_alpha = 0.03;
    RefineConfig refine;
    GuidanceConfig guidance;
    FmTrainConfig fm;
    std::uint64_t seed = 0;
    std::string output_dir;
};

struct SemRunRow {
    std::string method;
    int run = 0;
    std::uint64_t run_seed = 0;
    SkeletonMetrics metrics;
    std::size_t screening_edges = 0;  // gpc only
    std::size_t total_queries = 0;    // gpc only: audit length
    std::size_t budget_bound = 0;     // gpc only: (d_max+1) * M * |E_scr|
};

struct SemBenchResult {
    std::vector<SemRunRow> rows;
    std::vector<std::pair<int, AuditRecord>> audit;  // (run, record), gpc runs
};

/// Per run: fresh SEM spec + data at seed base+r, each method evaluated
/// against the ground-truth skeleton. Writes results.csv (aggregate
/// mean/std, deterministic), audit.jsonl (deterministic), trials.jsonl and
/// timings.csv when output_dir is set.
SemBenchResult run_sem_benchmark(const SemBenchRunConfig& cfg);

std::string sem_table_text(const SemBenchResult& result);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1); 0 for fewer than 2 values
};

MeanStd mean_std(const std::vector<double>& values);

}  // namespace fmcit
