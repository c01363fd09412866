#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fmcit/data_matrix.hpp"
#include "fmcit/skeleton.hpp"
#include "fmcit/stats.hpp"

namespace fmcit {

/// Conditional-independence oracle: p-value for "column i ⟂ column j | S".
/// Implementations must be deterministic given (i, j, S).
class CiOracle {
public:
    virtual ~CiOracle() = default;
    virtual double test(int i, int j, const std::vector<int>& S) = 0;
};

class FisherZOracle : public CiOracle {
public:
    explicit FisherZOracle(const DataMatrix& data) : data_(data) {}
    double test(int i, int j, const std::vector<int>& S) override;

private:
    const DataMatrix& data_;
};

/// Ground-truth oracle over a DAG: p = 1 when d-separated, 0 otherwise.
class DSepOracle : public CiOracle {
public:
    DSepOracle(int p, std::vector<std::pair<int, int>> dag_edges)
        : p_(p), edges_(std::move(dag_edges)) {}
    double test(int i, int j, const std::vector<int>& S) override;

private:
    int p_;
    std::vector<std::pair<int, int>> edges_;
};

/// FMCIT as a PC oracle; per-query seeds derive from (seed, i, j, sorted S)
/// so results do not depend on traversal order.
class FmcitOracle : public CiOracle {
public:
    FmcitOracle(const DataMatrix& data, const ConditionalSampler& sampler, FmcitOptions options)
        : data_(data), sampler_(sampler), options_(std::move(options)) {}
    double test(int i, int j, const std::vector<int>& S) override;

private:
    const DataMatrix& data_;
    const ConditionalSampler& sampler_;
    FmcitOptions options_;
};

/// PC-stable: complete graph, per-level frozen adjacencies, lexicographic
/// subset enumeration over Adj(i)\{j} then Adj(j)\{i} (duplicates skipped),
/// deletions applied at level end. Keeps an edge while every tested S gives
/// p ≤ alpha; records Sep(i,j) for each deletion.
Skeleton pc_stable_skeleton(int p, CiOracle& oracle, double alpha, int d_max);

}  // namespace fmcit
