#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fmcit {

/// Undirected graph over nodes 0..p-1 with separating-set records.
/// Sepsets are keyed by the unordered pair, so sepset(i,j) == sepset(j,i).
class Skeleton {
public:
    explicit Skeleton(int p);

    static Skeleton complete(int p);

    int node_count() const { return p_; }
    bool has_edge(int i, int j) const;
    void add_edge(int i, int j);     // drops any sepset recorded for the pair
    void remove_edge(int i, int j);  // no-op when absent
    const std::set<int>& adjacent(int i) const;

    /// Edges as (i, j) with i < j, lexicographically sorted.
    std::vector<std::pair<int, int>> edge_list() const;
    std::size_t edge_count() const;

    void set_sepset(int i, int j, std::vector<int> S);
    std::optional<std::vector<int>> sepset(int i, int j) const;
    const std::map<std::pair<int, int>, std::vector<int>>& sepsets() const { return sepsets_; }

    bool operator==(const Skeleton& other) const;

private:
    void check_pair(int i, int j) const;

    int p_ = 0;
    std::vector<std::set<int>> adj_;
    std::map<std::pair<int, int>, std::vector<int>> sepsets_;  // key i < j, values sorted
};

/// Relabel nodes: node v becomes perm[v]. Edges and sepsets map along.
Skeleton relabel(const Skeleton& g, const std::vector<int>& perm);

/// Text edge list, one "i j" line per edge (0-based, i < j), plus a JSON
/// sidecar holding the node count and sepsets.
void save_skeleton(const Skeleton& g, const std::string& edge_path,
                   const std::string& sepset_path);
Skeleton load_skeleton(const std::string& edge_path, const std::string& sepset_path);
Skeleton load_skeleton_edges(const std::string& edge_path, int p);

}  // namespace fmcit
