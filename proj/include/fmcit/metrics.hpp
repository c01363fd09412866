#pragma once

#include "fmcit/skeleton.hpp"

namespace fmcit {

struct SkeletonMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int shd = 0;  // false positives + false negatives over unordered pairs
    double runtime_seconds = 0.0;
};

/// Edge-recovery metrics over unordered pairs. Conventions: precision 0 when
/// nothing is predicted, F1 = 0 when precision + recall = 0.
SkeletonMetrics skeleton_metrics(const Skeleton& estimated, const Skeleton& truth);

}  // namespace fmcit
