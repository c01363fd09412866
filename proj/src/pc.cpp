#include "fmcit/pc.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "fmcit/dsep.hpp"
#include "fmcit/error.hpp"
#include "fmcit/rng.hpp"

namespace fmcit {

namespace {

// Visit size-k subsets of sorted `items` in lexicographic order until `fn`
// returns true. Reports whether a visit stopped the walk.
bool for_each_combination(const std::vector<int>& items, int k,
                          const std::function<bool(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(items.size());
    if (k > n) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) idx[static_cast<std::size_t>(t)] = t;
    std::vector<int> subset(static_cast<std::size_t>(k));
    while (true) {
        for (int t = 0; t < k; ++t) {
            subset[static_cast<std::size_t>(t)] = items[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
        }
        if (fn(subset)) return true;
        // advance the rightmost index that still has room
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) return false;
        ++idx[static_cast<std::size_t>(pos)];
        for (int t = pos + 1; t < k; ++t) {
            idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
        }
    }
}

std::string query_context(int i, int j, const std::vector<int>& S) {
    std::ostringstream ss;
    ss << "i=" << i << ", j=" << j << ", S={";
    for (std::size_t t = 0; t < S.size(); ++t) ss << (t ? "," : "") << S[t];
    ss << "}";
    return ss.str();
}

}  // namespace

double FisherZOracle::test(int i, int j, const std::vector<int>& S) {
    return fisher_z_test(data_, i, j, S).p_value;
}

double DSepOracle::test(int i, int j, const std::vector<int>& S) {
    return d_separated(p_, edges_, i, j, S) ? 1.0 : 0.0;
}

double FmcitOracle::test(int i, int j, const std::vector<int>& S) {
    FmcitOptions opt = options_;
    opt.seed = seed_for_query(options_.seed, i, j, S);
    return fmcit_with_sampler(data_, sampler_, i, j, S, opt).p_value;
}

Skeleton pc_stable_skeleton(int p, CiOracle& oracle, double alpha, int d_max) {
    if (d_max < 0) throw ConfigError("d_max must be non-negative");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");

    Skeleton g = Skeleton::complete(p);
    for (int level = 0; level <= d_max; ++level) {
        bool testable = false;
        for (int v = 0; v < p && !testable; ++v) {
            testable = static_cast<int>(g.adjacent(v).size()) - 1 >= level;
        }
        if (!testable) break;

        // Adjacency snapshot: every edge at this level sees the same graph.
        std::vector<std::vector<int>> frozen(static_cast<std::size_t>(p));
        for (int v = 0; v < p; ++v) {
            const auto& a = g.adjacent(v);
            frozen[static_cast<std::size_t>(v)].assign(a.begin(), a.end());
        }

        struct Deletion {
            int i, j;
            std::vector<int> sep;
        };
        std::vector<Deletion> deletions;

        for (auto [i, j] : g.edge_list()) {
            std::vector<int> cand_i, cand_j;
            for (int v : frozen[static_cast<std::size_t>(i)]) {
                if (v != j) cand_i.push_back(v);
            }
            for (int v : frozen[static_cast<std::size_t>(j)]) {
                if (v != i) cand_j.push_back(v);
            }

            bool separated = false;
            std::vector<int> sep;
            auto test_set = [&](const std::vector<int>& S) -> bool {
                double pv;
                try {
                    pv = oracle.test(i, j, S);
                } catch (const std::exception& e) {
                    throw OracleError("CI oracle failed at " + query_context(i, j, S) + ": " +
                                      e.what());
                }
                if (pv > alpha) {
                    separated = true;
                    sep = S;
                    return true;
                }
                return false;
            };

            for_each_combination(cand_i, level, test_set);
            if (!separated) {
                const std::set<int> side_i(cand_i.begin(), cand_i.end());
                for_each_combination(cand_j, level, [&](const std::vector<int>& S) {
                    const bool already_tested = std::all_of(
                        S.begin(), S.end(), [&side_i](int v) { return side_i.count(v) > 0; });
                    return already_tested ? false : test_set(S);
                });
            }
            if (separated) deletions.push_back({i, j, std::move(sep)});
        }

        for (auto& d : deletions) {
            g.remove_edge(d.i, d.j);
            g.set_sepset(d.i, d.j, std::move(d.sep));
        }
    }
    return g;
}

}  // namespace fmcit
