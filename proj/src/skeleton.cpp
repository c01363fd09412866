#include "fmcit/skeleton.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fmcit/error.hpp"
#include "json.hpp"

namespace fmcit {

Skeleton::Skeleton(int p) : p_(p), adj_(static_cast<std::size_t>(std::max(p, 0))) {
    if (p < 1) throw ConfigError("skeleton needs at least one node");
}

Skeleton Skeleton::complete(int p) {
    Skeleton g(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) g.add_edge(i, j);
    }
    return g;
}

void Skeleton::check_pair(int i, int j) const {
    if (i < 0 || i >= p_ || j < 0 || j >= p_) throw ConfigError("node index out of range");
    if (i == j) throw ConfigError("self-loops are not allowed");
}

bool Skeleton::has_edge(int i, int j) const {
    check_pair(i, j);
    return adj_[static_cast<std::size_t>(i)].count(j) > 0;
}

void Skeleton::add_edge(int i, int j) {
    check_pair(i, j);
    adj_[static_cast<std::size_t>(i)].insert(j);
    adj_[static_cast<std::size_t>(j)].insert(i);
    sepsets_.erase({std::min(i, j), std::max(i, j)});
}

void Skeleton::remove_edge(int i, int j) {
    check_pair(i, j);
    adj_[static_cast<std::size_t>(i)].erase(j);
    adj_[static_cast<std::size_t>(j)].erase(i);
}

const std::set<int>& Skeleton::adjacent(int i) const {
    if (i < 0 || i >= p_) throw ConfigError("node index out of range");
    return adj_[static_cast<std::size_t>(i)];
}

std::vector<std::pair<int, int>> Skeleton::edge_list() const {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < p_; ++i) {
        for (int j : adj_[static_cast<std::size_t>(i)]) {
            if (j > i) edges.emplace_back(i, j);
        }
    }
    return edges;  // already sorted: outer i ascending, sets ascending
}

std::size_t Skeleton::edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adj_) twice += a.size();
    return twice / 2;
}

void Skeleton::set_sepset(int i, int j, std::vector<int> S) {
    check_pair(i, j);
    std::sort(S.begin(), S.end());
    sepsets_[{std::min(i, j), std::max(i, j)}] = std::move(S);
}

std::optional<std::vector<int>> Skeleton::sepset(int i, int j) const {
    check_pair(i, j);
    auto it = sepsets_.find({std::min(i, j), std::max(i, j)});
    if (it == sepsets_.end()) return std::nullopt;
    return it->second;
}

bool Skeleton::operator==(const Skeleton& other) const {
    return p_ == other.p_ && adj_ == other.adj_ && sepsets_ == other.sepsets_;
}

Skeleton relabel(const Skeleton& g, const std::vector<int>& perm) {
    const int p = g.node_count();
    if (static_cast<int>(perm.size()) != p) throw ConfigError("permutation size mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    for (int v : perm) {
        if (v < 0 || v >= p || seen[static_cast<std::size_t>(v)]) {
            throw ConfigError("not a permutation of the node set");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    Skeleton out(p);
    for (auto [i, j] : g.edge_list()) {
        out.add_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (const auto& [key, S] : g.sepsets()) {
        std::vector<int> mapped;
        mapped.reserve(S.size());
        for (int v : S) mapped.push_back(perm[static_cast<std::size_t>(v)]);
        out.set_sepset(perm[static_cast<std::size_t>(key.first)],
                       perm[static_cast<std::size_t>(key.second)], std::move(mapped));
    }
    return out;
}

void save_skeleton(const Skeleton& g, const std::string& edge_path,
                   const std::string& sepset_path) {
    {
        std::ofstream out(edge_path);
        if (!out) throw DataError("cannot open for writing: " + edge_path);
        for (auto [i, j] : g.edge_list()) out << i << ' ' << j << '\n';
    }
    nlohmann::json side;
    side["p"] = g.node_count();
    auto& recs = side["sepsets"] = nlohmann::json::array();
    for (const auto& [key, S] : g.sepsets()) {
        recs.push_back({{"i", key.first}, {"j", key.second}, {"s", S}});
    }
    std::ofstream out(sepset_path);
    if (!out) throw DataError("cannot open for writing: " + sepset_path);
    out << side.dump() << '\n';
}

Skeleton load_skeleton_edges(const std::string& edge_path, int p) {
    std::ifstream in(edge_path);
    if (!in) throw DataError("cannot open: " + edge_path);
    Skeleton g(p);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        int i = 0, j = 0;
        if (!(ss >> i >> j)) {
            throw DataError("bad edge at " + edge_path + ":" + std::to_string(line_no));
        }
        g.add_edge(i, j);
    }
    return g;
}

Skeleton load_skeleton(const std::string& edge_path, const std::string& sepset_path) {
    std::ifstream in(sepset_path);
    if (!in) throw DataError("cannot open: " + sepset_path);
    nlohmann::json side;
    try {
        in >> side;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad sepset sidecar " + sepset_path + ": " + e.what());
    }
    if (!side.contains("p")) throw DataError("sepset sidecar missing node count");
    Skeleton g = load_skeleton_edges(edge_path, side["p"].get<int>());
    for (const auto& rec : side.value("sepsets", nlohmann::json::array())) {
        g.set_sepset(rec.at("i").get<int>(), rec.at("j").get<int>(),
                     rec.at("s").get<std::vector<int>>());
    }
    return g;
}

}  // namespace fmcit
