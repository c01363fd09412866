#pragma once

#include <utility>
#include <vector>

namespace fmcit {

/// Exact d-separation in a DAG via the ancestral moral graph: restrict to
/// ancestors of {i, j} ∪ S, marry co-parents, drop directions, delete S,
/// then i ⟂ j | S iff i and j are disconnected.
bool d_separated(int p, const std::vector<std::pair<int, int>>& dag_edges, int i, int j,
                 const std::vector<int>& S);

}  // namespace fmcit
