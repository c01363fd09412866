#include "fmcit/metrics.hpp"

#include "fmcit/error.hpp"

namespace fmcit {

SkeletonMetrics skeleton_metrics(const Skeleton& estimated, const Skeleton& truth) {
    if (estimated.node_count() != truth.node_count()) {
        throw DimensionError("skeletons cover different node sets");
    }
    int tp = 0, fp = 0, fn = 0;
    for (auto [i, j] : estimated.edge_list()) {
        (truth.has_edge(i, j) ? tp : fp)++;
    }
    for (auto [i, j] : truth.edge_list()) {
        if (!estimated.has_edge(i, j)) ++fn;
    }

    SkeletonMetrics m;
    m.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.f1 = m.precision + m.recall > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.shd = fp + fn;
    return m;
}

}  // namespace fmcit
