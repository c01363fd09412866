#include "fmcit/gpc.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "fmcit/error.hpp"
#include "fmcit/pc.hpp"
#include "fmcit/rng.hpp"
#include "json.hpp"

namespace fmcit {

namespace {

void validate_guidance(const GuidanceConfig& cfg) {
    if (cfg.pool_size < 1) throw ConfigError("pool size k must be >= 1");
    if (cfg.budget < 1) throw ConfigError("budget M must be >= 1");
    if (!(cfg.stab_low >= 0.0 && cfg.stab_low <= cfg.stab_high && cfg.stab_high <= 1.0)) {
        throw ConfigError("need 0 <= stab_low <= stab_high <= 1");
    }
    if (cfg.rule == GuidanceRule::Stab && cfg.stab_alphas.empty()) {
        throw ConfigError("stab rule needs at least one screening alpha");
    }
}

std::vector<int> components_from_adjacency(const std::vector<std::set<int>>& adj) {
    const int p = static_cast<int>(adj.size());
    std::vector<int> cid(static_cast<std::size_t>(p), -1);
    int next = 0;
    for (int start = 0; start < p; ++start) {
        if (cid[static_cast<std::size_t>(start)] >= 0) continue;
        std::deque<int> queue{start};
        cid[static_cast<std::size_t>(start)] = next;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int nb : adj[static_cast<std::size_t>(v)]) {
                if (cid[static_cast<std::size_t>(nb)] < 0) {
                    cid[static_cast<std::size_t>(nb)] = next;
                    queue.push_back(nb);
                }
            }
        }
        ++next;
    }
    return cid;
}

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int t = 1; t <= k; ++t) {
        c = c * static_cast<std::uint64_t>(n - k + t) / static_cast<std::uint64_t>(t);
        if (c > cap) return cap + 1;  // only "above cap" matters to callers
    }
    return c;
}

}  // namespace

std::string to_string(GuidanceRule r) {
    switch (r) {
        case GuidanceRule::Stab: return "stab";
        case GuidanceRule::Tri: return "tri";
        case GuidanceRule::None: return "none";
    }
    throw ConfigError("unknown guidance rule");
}

GuidanceRule guidance_rule_from_string(const std::string& s) {
    if (s == "stab") return GuidanceRule::Stab;
    if (s == "tri") return GuidanceRule::Tri;
    if (s == "none") return GuidanceRule::None;
    throw ConfigError("unknown guidance rule: " + s);
}

ComponentStructure build_components(const DataMatrix& data, const Skeleton& g_scr,
                                    const GuidanceConfig& cfg, int d_scr_max) {
    validate_guidance(cfg);
    const int p = g_scr.node_count();
    if (data.cols() != p) throw DimensionError("data and screening graph disagree on p");

    ComponentStructure out;
    if (cfg.rule == GuidanceRule::None) {
        out.cid.assign(static_cast<std::size_t>(p), 0);
    } else {
        std::vector<std::set<int>> comp_adj(static_cast<std::size_t>(p));
        if (cfg.rule == GuidanceRule::Stab) {
            std::map<std::pair<int, int>, int> counts;
            for (double a : cfg.stab_alphas) {
                FisherZOracle oracle(data);
                const Skeleton run = pc_stable_skeleton(p, oracle, a, d_scr_max);
                for (auto e : run.edge_list()) ++counts[e];
            }
            const double runs = static_cast<double>(cfg.stab_alphas.size());
            for (const auto& [e, c] : counts) {
                if (static_cast<double>(c) / runs >= cfg.stab_high) {
                    comp_adj[static_cast<std::size_t>(e.first)].insert(e.second);
                    comp_adj[static_cast<std::size_t>(e.second)].insert(e.first);
                }
            }
            for (auto e : g_scr.edge_list()) {
                const auto it = counts.find(e);
                const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / runs;
                if (freq <= cfg.stab_low) out.unstable_edges.insert(e);
            }
        } else {  // Tri: edges supported by at least one triangle
            for (auto [i, j] : g_scr.edge_list()) {
                const auto& ai = g_scr.adjacent(i);
                const auto& aj = g_scr.adjacent(j);
                const bool in_triangle =
                    std::any_of(ai.begin(), ai.end(),
                                [&aj, j2 = j](int k) { return k != j2 && aj.count(k) > 0; });
                if (in_triangle) {
                    comp_adj[static_cast<std::size_t>(i)].insert(j);
                    comp_adj[static_cast<std::size_t>(j)].insert(i);
                }
            }
        }
        out.cid = components_from_adjacency(comp_adj);
    }

    // Global order pi: descending degree in g_scr, ties by index. Under the
    // stab rule, edges below the stability floor do not count toward degree.
    std::vector<int> degree(static_cast<std::size_t>(p), 0);
    for (auto e : g_scr.edge_list()) {
        if (cfg.rule == GuidanceRule::Stab && out.unstable_edges.count(e) > 0) continue;
        ++degree[static_cast<std::size_t>(e.first)];
        ++degree[static_cast<std::size_t>(e.second)];
    }
    out.order.resize(static_cast<std::size_t>(p));
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(), [&degree](int a, int b) {
        return degree[static_cast<std::size_t>(a)] > degree[static_cast<std::size_t>(b)];
    });
    out.rank.assign(static_cast<std::size_t>(p), 0);
    for (int pos = 0; pos < p; ++pos) {
        out.rank[static_cast<std::size_t>(out.order[static_cast<std::size_t>(pos)])] = pos;
    }
    return out;
}

std::vector<int> build_pool(int i, int j, const Skeleton& g_scr, const ComponentStructure& comps,
                            const GuidanceConfig& cfg) {
    validate_guidance(cfg);
    const int p = g_scr.node_count();
    if (i == j) throw ConfigError("pool endpoints must differ");
    if (i < 0 || i >= p || j < 0 || j >= p) throw ConfigError("node index out of range");
    if (static_cast<int>(comps.cid.size()) != p || static_cast<int>(comps.rank.size()) != p) {
        throw DimensionError("component structure does not cover the node set");
    }

    std::set<int> q_set;
    for (int v : g_scr.adjacent(i)) {
        if (v != j) q_set.insert(v);
    }
    for (int v : g_scr.adjacent(j)) {
        if (v != i) q_set.insert(v);
    }

    const int ci = comps.cid[static_cast<std::size_t>(i)];
    const int cj = comps.cid[static_cast<std::size_t>(j)];
    std::vector<int> outside, inside;
    for (int v : q_set) {
        const int cv = comps.cid[static_cast<std::size_t>(v)];
        (cv != ci && cv != cj ? outside : inside).push_back(v);
    }
    auto by_rank = [&comps](int a, int b) {
        return comps.rank[static_cast<std::size_t>(a)] < comps.rank[static_cast<std::size_t>(b)];
    };
    std::sort(outside.begin(), outside.end(), by_rank);
    std::sort(inside.begin(), inside.end(), by_rank);

    const auto target = static_cast<std::size_t>(std::min(cfg.pool_size, p - 2));
    std::vector<int> pool;
    pool.reserve(target);
    for (int v : outside) {
        if (pool.size() < target) pool.push_back(v);
    }
    for (int v : inside) {
        if (pool.size() < target) pool.push_back(v);
    }
    for (int v : comps.order) {
        if (pool.size() >= target) break;
        if (v != i && v != j && q_set.count(v) == 0) pool.push_back(v);
    }
    return pool;
}

std::vector<std::vector<int>> budgeted_sets(const std::vector<int>& pool, int level, int M,
                                            std::uint64_t seed) {
    const int n = static_cast<int>(pool.size());
    if (level < 0 || level > n) throw ConfigError("subset size must lie in [0, |pool|]");
    if (M < 1) throw ConfigError("budget M must be >= 1");
    if (level == 0) return {{}};

    std::vector<std::vector<int>> sets;
    auto emit = [&pool, &sets](const std::vector<int>& positions) {
        std::vector<int> s;
        s.reserve(positions.size());
        for (int pos : positions) s.push_back(pool[static_cast<std::size_t>(pos)]);
        std::sort(s.begin(), s.end());
        sets.push_back(std::move(s));
    };

    if (binomial_capped(n, level, static_cast<std::uint64_t>(M)) <= static_cast<std::uint64_t>(M)) {
        // full enumeration, lexicographic over pool positions
        std::vector<int> idx(static_cast<std::size_t>(level));
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            emit(idx);
            int pos = level - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - level + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int t = pos + 1; t < level; ++t) {
                idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
            }
        }
        return sets;
    }

    // uniform distinct draws: partial Fisher-Yates per draw, reject repeats
    std::mt19937_64 rng(seed);
    std::set<std::vector<int>> seen;
    std::vector<int> cells(static_cast<std::size_t>(n));
    while (static_cast<int>(sets.size()) < M) {
        std::iota(cells.begin(), cells.end(), 0);
        for (int t = 0; t < level; ++t) {
            std::uniform_int_distribution<int> pick(t, n - 1);
            std::swap(cells[static_cast<std::size_t>(t)], cells[static_cast<std::size_t>(pick(rng))]);
        }
        std::vector<int> positions(cells.begin(), cells.begin() + level);
        std::sort(positions.begin(), positions.end());
        if (seen.insert(positions).second) emit(positions);
    }
    return sets;
}

std::string audit_record_to_json(const AuditRecord& rec) {
    nlohmann::json row;
    row["i"] = rec.i;
    row["j"] = rec.j;
    row["level"] = rec.level;
    row["B"] = rec.B;
    row["S"] = rec.S;
    row["p_value"] = rec.p_value;
    row["statistic"] = rec.statistic;
    row["failed"] = rec.failed;
    return row.dump();
}

void write_audit_jsonl(const std::vector<AuditRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    for (const auto& rec : records) out << audit_record_to_json(rec) << '\n';
}

GpcResult gpc_fmcit(const DataMatrix& data, const RefineConfig& rcfg, const GuidanceConfig& gcfg,
                    const FmTrainConfig& fm_cfg) {
    validate_guidance(gcfg);
    if (!(rcfg.alpha_scr > 0.0 && rcfg.alpha_scr < 1.0) ||
        !(rcfg.alpha_fm > 0.0 && rcfg.alpha_fm < 1.0)) {
        throw ConfigError("screening/refinement alphas must lie in (0,1)");
    }
    if (rcfg.d_max < 0) throw ConfigError("d_max must be non-negative");
    if (rcfg.B0 < 1 || rcfg.B1 < 1 || rcfg.B0 > rcfg.B_max || rcfg.B1 > rcfg.B_max) {
        throw ConfigError("CRT repeat counts must satisfy 1 <= B0, B1 <= B_max");
    }
    if (!(rcfg.train_ratio > 0.0 && rcfg.train_ratio < 1.0)) {
        throw ConfigError("train ratio must lie in (0,1)");
    }
    if (rcfg.sampling_steps < 1) throw ConfigError("sampling grid needs at least one step");
    if (rcfg.harmonize < 1) throw ConfigError("harmonize needs at least one sweep");

    const int p = static_cast<int>(data.cols());
    GpcResult res;

    // Stage I: linear screening.
    FisherZOracle scr_oracle(data);
    res.screening = pc_stable_skeleton(p, scr_oracle, rcfg.alpha_scr, rcfg.screening_depth());

    // Stage II: guidance structures and per-edge pools.
    res.components = build_components(data, res.screening, gcfg, rcfg.screening_depth());
    std::map<std::pair<int, int>, std::vector<int>> pools;
    for (auto e : res.screening.edge_list()) {
        pools[e] = build_pool(e.first, e.second, res.screening, res.components, gcfg);
    }

    // Stage III: one model for every refinement query.
    const Eigen::Index n_train = split_train_rows(data.rows(), rcfg.train_ratio);
    res.model = train_flow_matching(data.head_rows(n_train), fm_cfg);
    SamplingSchedule schedule = SamplingSchedule::uniform(rcfg.sampling_steps);
    schedule.harmonize = rcfg.harmonize;
    FlowSampler sampler(res.model, schedule);

    Skeleton g = res.screening;
    res.queries_per_level.assign(static_cast<std::size_t>(rcfg.d_max) + 1, 0);
    for (int level = 0; level <= rcfg.d_max; ++level) {
        const auto edges = g.edge_list();
        res.edges_at_level.push_back(edges.size());
        if (edges.empty()) break;

        struct Deletion {
            int i, j;
            std::vector<int> sep;
        };
        std::vector<Deletion> deletions;

        for (auto [i, j] : edges) {
            const auto& pool = pools.at({i, j});
            if (level > static_cast<int>(pool.size())) continue;
            const auto sets = budgeted_sets(
                pool, level, gcfg.budget,
                seed_mix({gcfg.seed, 0x53455453ULL, static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(level)}));

            for (const auto& S : sets) {
                FmcitOptions opt;
                opt.B = std::min(level == 0 ? rcfg.B0 : rcfg.B1, rcfg.B_max);
                opt.statistic = level == 0 ? rcfg.stat_level0 : rcfg.stat_higher;
                opt.rdc = rcfg.rdc;
                opt.schedule = schedule;
                opt.seed = seed_for_query(gcfg.seed, i, j, S);
                opt.train_test_split = rcfg.train_ratio;
                opt.max_rows_per_chunk = rcfg.max_rows_per_chunk;

                AuditRecord rec;
                rec.i = i;
                rec.j = j;
                rec.level = level;
                rec.B = opt.B;
                rec.S = S;
                bool separated = false;
                try {
                    const CITOutcome outcome = fmcit_with_sampler(data, sampler, i, j, S, opt);
                    rec.p_value = outcome.p_value;
                    rec.statistic = outcome.statistic_observed;
                    separated = outcome.p_value > rcfg.alpha_fm;
                } catch (const std::exception&) {
                    rec.failed = true;  // certifies nothing: the edge stays
                    rec.p_value = 0.0;
                }
                res.audit.push_back(rec);
                ++res.queries_per_level[static_cast<std::size_t>(level)];
                if (separated) {
                    deletions.push_back({i, j, S});
                    break;  // first accepted separating set wins
                }
            }
        }

        for (auto& d : deletions) {
            g.remove_edge(d.i, d.j);
            g.set_sepset(d.i, d.j, std::move(d.sep));
        }
    }

    res.skeleton = std::move(g);
    return res;
}

}  // namespace fmcit
