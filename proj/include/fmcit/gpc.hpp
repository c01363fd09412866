#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fmcit/data_matrix.hpp"
#include "fmcit/flow_matching.hpp"
#include "fmcit/skeleton.hpp"
#include "fmcit/stats.hpp"

namespace fmcit {

enum class GuidanceRule { Stab, Tri, None };

std::string to_string(GuidanceRule r);
GuidanceRule guidance_rule_from_string(const std::string& s);

struct GuidanceConfig {
    GuidanceRule rule = GuidanceRule::Stab;
    int pool_size = 10;  // k
    int budget = 2;      // M conditioning sets per edge per level
    std::vector<double> stab_alphas = {0.08, 0.10, 0.12};
    double stab_low = 0.35;   // freq <= low: edge ignored when ranking nodes
    double stab_high = 0.65;  // freq >= high: edge enters the stability graph
    std::uint64_t seed = 0;
};

struct RefineConfig {
    double alpha_scr = 0.15;
    double alpha_fm = 0.07;
    int d_max = 2;
    int d_scr_max = -1;  // negative: use d_max
    int B0 = 15;         // CRT repeats at level 0
    int B1 = 20;         // CRT repeats at level >= 1
    int B_max = 200;
    Statistic stat_level0 = Statistic::Rdc;
    Statistic stat_higher = Statistic::AbsCorr;
    RdcConfig rdc;
    int sampling_steps = 15;   // imputation grid length L
    int harmonize = 2;         // sampler sweeps per grid point (see SamplingSchedule)
    double train_ratio = 0.6;  // model trains on this head fraction
    Eigen::Index max_rows_per_chunk = 1 << 16;

    int screening_depth() const { return d_scr_max < 0 ? d_max : d_scr_max; }
};

struct ComponentStructure {
    std::vector<int> cid;    // node -> component id
    std::vector<int> order;  // global ranking pi, best node first
    std::vector<int> rank;   // node -> position in pi
    std::set<std::pair<int, int>> unstable_edges;  // stab rule only; pairs i < j
};

/// Stage II component extraction. stab: edge-selection frequencies across
/// Fisher-Z screenings at stab_alphas, components from freq >= stab_high.
/// tri: components from triangle-supported edges of g_scr. none: one
/// component. pi ranks by descending screening degree (stab rule discounts
/// unstable edges), ties by index.
ComponentStructure build_components(const DataMatrix& data, const Skeleton& g_scr,
                                    const GuidanceConfig& cfg, int d_scr_max);

/// Guided conditioning pool for edge (i, j): candidates from the screening
/// neighborhoods, out-of-component nodes first, completed from the global
/// order; always min(k, p-2) entries.
std::vector<int> build_pool(int i, int j, const Skeleton& g_scr, const ComponentStructure& comps,
                            const GuidanceConfig& cfg);

/// At most M distinct size-`level` subsets of the pool: full enumeration when
/// C(|pool|, level) <= M, otherwise uniform distinct draws from the given
/// seed. Each set is sorted by variable index.
std::vector<std::vector<int>> budgeted_sets(const std::vector<int>& pool, int level, int M,
                                            std::uint64_t seed);

struct AuditRecord {
    int i = 0;
    int j = 0;
    int level = 0;
    int B = 0;
    std::vector<int> S;
    double p_value = 0.0;
    double statistic = 0.0;
    bool failed = false;
};

std::string audit_record_to_json(const AuditRecord& rec);
void write_audit_jsonl(const std::vector<AuditRecord>& records, const std::string& path);

struct GpcResult {
    Skeleton skeleton;   // refined output
    Skeleton screening;  // Stage-I graph G_scr
    ComponentStructure components;
    std::vector<AuditRecord> audit;
    std::vector<std::size_t> queries_per_level;  // N^(l)
    std::vector<std::size_t> edges_at_level;     // |E^(l)| at level start
    VectorFieldModel model;

    GpcResult() : skeleton(1), screening(1) {}
};

/// Full pipeline: Fisher-Z screening, guidance structures, one
/// flow-matching model trained on the head split, then budgeted CRT-driven
/// edge deletion with per-level removal lists and early stopping per edge.
/// A query that throws is logged failed and treated as "keep the edge".
GpcResult gpc_fmcit(const DataMatrix& data, const RefineConfig& rcfg, const GuidanceConfig& gcfg,
                    const FmTrainConfig& fm_cfg);

}  // namespace fmcit
