#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fmcit/data_matrix.hpp"
#include "fmcit/skeleton.hpp"

namespace fmcit {

// ---- post-nonlinear CIT benchmark -----------------------------------------

enum class CitFunction { Identity, Square, Cos, Cube, Tanh };

double apply_cit_function(CitFunction f, double u);
std::string to_string(CitFunction f);

struct CitBenchConfig {
    int d_z = 10;
    Eigen::Index n = 1000;
    double scale = 1.0;        // noise scale s
    bool alternative = false;  // false: H0 (CI holds), true: H1
    std::uint64_t seed = 0;
};

struct CitDataset {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::MatrixXd z;  // n x d_z
    bool alternative = false;
    CitFunction f1 = CitFunction::Identity;
    CitFunction f2 = CitFunction::Identity;
};

/// Z iid N(0,1); m = row mean of Z; X = f1(m + s*eps_x), Y = f2(m + s*eps_y);
/// under H1 both arguments additionally share the term 0.5*e_b.
/// f1, f2 drawn uniformly from the five-function family per dataset.
CitDataset gen_cit_benchmark(const CitBenchConfig& cfg);

/// Same construction with the outer functions pinned by the caller.
CitDataset gen_cit_benchmark_with(const CitBenchConfig& cfg, CitFunction f1, CitFunction f2);

/// Columns: x, y, z1..z_dz.
DataMatrix cit_dataset_to_matrix(const CitDataset& ds);

// ---- post-nonlinear SEM benchmark ------------------------------------------

enum class EdgeFunction { Tanh, Sin, Quadratic, SignedSqrt, LeakyRelu };
enum class NodeFunction { Identity, Tanh, ClippedSinh, SignedLog1p };

double apply_edge_function(EdgeFunction f, double u);
double apply_node_function(NodeFunction g, double u);
std::string to_string(EdgeFunction f);
std::string to_string(NodeFunction g);
EdgeFunction edge_function_from_string(const std::string& s);
NodeFunction node_function_from_string(const std::string& s);

/// exp_edges distinct pairs (i, j) with i < j, uniform without replacement,
/// returned sorted. The fixed order 0..p-1 is the topological order.
std::vector<std::pair<int, int>> gen_random_dag(int p, int exp_edges, std::uint64_t seed);

struct SemEdge {
    int i = 0;  // parent
    int j = 0;  // child, always > i
    double weight = 0.0;
    EdgeFunction f = EdgeFunction::Tanh;
};

struct SemSpec {
    int p = 0;
    std::vector<SemEdge> edges;
    std::vector<NodeFunction> node_fn;  // g_j per node
    double noise_df = 3.0;
    std::uint64_t seed = 0;
};

/// Random DAG + weights sign*Unif(0.7, 1.3) + uniformly drawn edge/node
/// function tags.
SemSpec make_sem_spec(int p, int exp_edges, double noise_df, std::uint64_t seed);

struct SemData {
    DataMatrix data;
    Skeleton truth;  // undirected skeleton of the generating DAG

    SemData() : truth(1) {}
};

/// X_j = g_j( sum_{i in Pa(j)} w_ij f_ij(X_i) + eps_j ), eps_j Student-t(df),
/// nodes generated in index order.
SemData gen_sem_data(const SemSpec& spec, Eigen::Index n);

std::string sem_spec_to_json(const SemSpec& spec);
SemSpec sem_spec_from_json(const std::string& text);

}  // namespace fmcit
