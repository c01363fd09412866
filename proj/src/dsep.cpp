#include "fmcit/dsep.hpp"

#include <deque>

#include "fmcit/error.hpp"

namespace fmcit {

bool d_separated(int p, const std::vector<std::pair<int, int>>& dag_edges, int i, int j,
                 const std::vector<int>& S) {
    auto check = [p](int v) {
        if (v < 0 || v >= p) throw ConfigError("node index out of range");
    };
    check(i);
    check(j);
    if (i == j) throw ConfigError("d_separated needs distinct endpoints");
    std::vector<bool> in_s(static_cast<std::size_t>(p), false);
    for (int v : S) {
        check(v);
        if (v == i || v == j) throw ConfigError("conditioning set overlaps endpoints");
        in_s[static_cast<std::size_t>(v)] = true;
    }

    std::vector<std::vector<int>> parents(static_cast<std::size_t>(p));
    for (auto [a, b] : dag_edges) {
        check(a);
        check(b);
        parents[static_cast<std::size_t>(b)].push_back(a);
    }

    // Ancestral closure of {i, j} ∪ S.
    std::vector<bool> anc(static_cast<std::size_t>(p), false);
    std::deque<int> queue{i, j};
    for (int v : S) queue.push_back(v);
    for (int v : queue) anc[static_cast<std::size_t>(v)] = true;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int par : parents[static_cast<std::size_t>(v)]) {
            if (!anc[static_cast<std::size_t>(par)]) {
                anc[static_cast<std::size_t>(par)] = true;
                queue.push_back(par);
            }
        }
    }

    // Moralized undirected graph on the ancestral set, with S removed.
    std::vector<std::vector<int>> und(static_cast<std::size_t>(p));
    auto usable = [&](int v) { return anc[static_cast<std::size_t>(v)] && !in_s[static_cast<std::size_t>(v)]; };
    auto link = [&](int a, int b) {
        if (usable(a) && usable(b)) {
            und[static_cast<std::size_t>(a)].push_back(b);
            und[static_cast<std::size_t>(b)].push_back(a);
        }
    };
    for (int child = 0; child < p; ++child) {
        if (!anc[static_cast<std::size_t>(child)]) continue;
        // Marry co-parents of every ancestral child, S-members included —
        // conditioning on a collider is exactly what opens those paths.
        const auto& pars = parents[static_cast<std::size_t>(child)];
        for (std::size_t a = 0; a < pars.size(); ++a) {
            link(pars[a], child);
            for (std::size_t b = a + 1; b < pars.size(); ++b) link(pars[a], pars[b]);
        }
    }

    // BFS from i to j over the remaining graph.
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    std::deque<int> bfs{i};
    seen[static_cast<std::size_t>(i)] = true;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop_front();
        if (v == j) return false;
        for (int nb : und[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(nb)]) {
                seen[static_cast<std::size_t>(nb)] = true;
                bfs.push_back(nb);
            }
        }
    }
    return true;
}

}  // namespace fmcit
