#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "fmcit/error.hpp"
#include "fmcit/stats.hpp"
#include "fmcit/synthetic.hpp"

using namespace fmcit;

namespace {

double sample_cov(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double ma = a.mean(), mb = b.mean();
    return ((a.array() - ma) * (b.array() - mb)).sum() / (a.size() - 1.0);
}

}  // namespace

TEST_CASE("cit generator: zero-scale identity limit collapses to the row mean") {
    CitBenchConfig cfg;
    cfg.d_z = 4;
    cfg.n = 50;
    cfg.scale = 0.0;
    cfg.alternative = false;
    cfg.seed = 3;
    const CitDataset ds = gen_cit_benchmark_with(cfg, CitFunction::Identity, CitFunction::Identity);
    const Eigen::VectorXd m = ds.z.rowwise().mean();
    CHECK(ds.x == m);
    CHECK(ds.y == m);
}

TEST_CASE("cit generator: H0 leaves x and y conditionally independent given the row mean") {
    CitBenchConfig cfg;
    cfg.d_z = 10;
    cfg.n = 5000;
    cfg.scale = 1.0;
    cfg.seed = 11;
    const CitDataset ds = gen_cit_benchmark_with(cfg, CitFunction::Identity, CitFunction::Identity);

    Eigen::MatrixXd values(cfg.n, 3);
    values.col(0) = ds.x;
    values.col(1) = ds.y;
    values.col(2) = ds.z.rowwise().mean();
    const FisherZOutcome out = fisher_z_test(DataMatrix(values), 0, 1, {2});
    CHECK(std::abs(out.partial_corr) < 0.08);
}

TEST_CASE("cit generator: the shared H1 term raises the covariance by a quarter") {
    CitBenchConfig cfg;
    cfg.d_z = 10;
    cfg.n = 20000;
    cfg.scale = 1.0;
    cfg.seed = 13;

    CitBenchConfig null_cfg = cfg;
    null_cfg.alternative = false;
    CitBenchConfig alt_cfg = cfg;
    alt_cfg.alternative = true;

    const CitDataset h0 = gen_cit_benchmark_with(null_cfg, CitFunction::Identity, CitFunction::Identity);
    const CitDataset h1 = gen_cit_benchmark_with(alt_cfg, CitFunction::Identity, CitFunction::Identity);

    // same seed: identical Z and noise draws, so the comparison is paired
    CHECK(h0.z == h1.z);
    const double lift = sample_cov(h1.x, h1.y) - sample_cov(h0.x, h0.y);
    CHECK(lift > 0.22);
    CHECK(lift < 0.28);
}

TEST_CASE("cit generator: the H1 channel is added after the outer functions") {
    // paired seeds: the H1-minus-H0 delta must be one shared draw applied to
    // both columns verbatim, which only holds when the term lands outside the
    // nonlinearities (inside, a square/cos would warp it differently per column)
    CitBenchConfig cfg;
    cfg.d_z = 6;
    cfg.n = 20000;
    cfg.scale = 0.75;
    cfg.seed = 17;

    CitBenchConfig null_cfg = cfg;
    null_cfg.alternative = false;
    CitBenchConfig alt_cfg = cfg;
    alt_cfg.alternative = true;

    const CitDataset h0 = gen_cit_benchmark_with(null_cfg, CitFunction::Square, CitFunction::Cos);
    const CitDataset h1 = gen_cit_benchmark_with(alt_cfg, CitFunction::Square, CitFunction::Cos);

    const Eigen::VectorXd dx = h1.x - h0.x;
    const Eigen::VectorXd dy = h1.y - h0.y;
    // equal up to the rounding of (f + shared) - f; an inside-placement
    // disagreement would be O(1), not O(ulp)
    CHECK((dx - dy).cwiseAbs().maxCoeff() <= 1e-12);
    const double n = double(cfg.n);
    const double mean = dx.mean();
    const double var = (dx.array() - mean).square().sum() / (n - 1.0);
    CHECK(std::abs(mean) < 0.02);      // 0.5 * e_b has mean 0
    CHECK(std::abs(var - 0.25) < 0.02);  // ... and variance 0.25
}

TEST_CASE("cit generator: outer functions vary across seeds and datasets reproduce bitwise") {
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CitBenchConfig cfg;
        cfg.d_z = 3;
        cfg.n = 12;
        cfg.seed = seed;
        const CitDataset ds = gen_cit_benchmark(cfg);
        seen.insert(to_string(ds.f1) + "/" + to_string(ds.f2));
    }
    CHECK(seen.size() > 1);

    CitBenchConfig cfg;
    cfg.d_z = 5;
    cfg.n = 30;
    cfg.seed = 21;
    const CitDataset a = gen_cit_benchmark(cfg);
    const CitDataset b = gen_cit_benchmark(cfg);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.z == b.z);
    CHECK(a.f1 == b.f1);
    CHECK(a.f2 == b.f2);

    const DataMatrix mat = cit_dataset_to_matrix(a);
    CHECK(mat.cols() == 7);
    CHECK(mat.name(0) == "x");
    CHECK(mat.name(1) == "y");
    CHECK(mat.name(2) == "z1");
    CHECK(mat.values.col(0) == a.x);

    CitBenchConfig bad = cfg;
    bad.d_z = 0;
    CHECK_THROWS_AS(gen_cit_benchmark(bad), ConfigError);
    bad = cfg;
    bad.n = 5;
    CHECK_THROWS_AS(gen_cit_benchmark(bad), ConfigError);
    bad = cfg;
    bad.scale = -0.5;
    CHECK_THROWS_AS(gen_cit_benchmark(bad), ConfigError);
}

TEST_CASE("random dag: forced and saturated cases") {
    CHECK(gen_random_dag(2, 1, 9) == std::vector<std::pair<int, int>>{{0, 1}});

    const auto full = gen_random_dag(4, 6, 10);
    const std::vector<std::pair<int, int>> want{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    CHECK(full == want);

    CHECK_THROWS_AS(gen_random_dag(4, 7, 1), ConfigError);
    CHECK(gen_random_dag(5, 0, 2).empty());
}

TEST_CASE("random dag: edges are uniform over candidate pairs") {
    const int p = 50, e = 75, draws = 20000;
    std::map<std::pair<int, int>, int> counts;
    for (int seed = 0; seed < draws; ++seed) {
        const auto dag = gen_random_dag(p, e, static_cast<std::uint64_t>(seed));
        REQUIRE(dag.size() == 75);
        std::set<std::pair<int, int>> distinct(dag.begin(), dag.end());
        REQUIRE(distinct.size() == 75);
        for (auto [i, j] : dag) {
            REQUIRE(i < j);
            ++counts[{i, j}];
        }
    }
    CHECK(counts.size() == 1225);
    const double expect = 75.0 / 1225.0;
    for (const auto& [pair, count] : counts) {
        const double freq = static_cast<double>(count) / draws;
        CHECK(freq > expect - 0.01);
        CHECK(freq < expect + 0.01);
    }
}

TEST_CASE("edge and node functions: pinned forms") {
    CHECK(apply_edge_function(EdgeFunction::LeakyRelu, 2.5) == 2.5);
    CHECK(apply_edge_function(EdgeFunction::LeakyRelu, -2.0) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(apply_edge_function(EdgeFunction::Quadratic, 3.0) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(apply_edge_function(EdgeFunction::SignedSqrt, -4.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(apply_edge_function(EdgeFunction::Tanh, 0.5) == std::tanh(0.5));
    CHECK(apply_edge_function(EdgeFunction::Sin, 0.5) == std::sin(0.5));

    CHECK(apply_node_function(NodeFunction::Identity, -1.7) == -1.7);
    CHECK(apply_node_function(NodeFunction::Tanh, 0.3) == std::tanh(0.3));
    CHECK(apply_node_function(NodeFunction::ClippedSinh, 5.0) == std::sinh(3.0));
    CHECK(apply_node_function(NodeFunction::ClippedSinh, -9.0) == std::sinh(-3.0));
    CHECK(apply_node_function(NodeFunction::SignedLog1p, std::exp(1.0) - 1.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(apply_node_function(NodeFunction::SignedLog1p, -(std::exp(1.0) - 1.0)) ==
          doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("sem spec: construction invariants and JSON round trip") {
    const SemSpec spec = make_sem_spec(12, 18, 3.0, 44);
    CHECK(spec.p == 12);
    CHECK(spec.edges.size() == 18);
    CHECK(spec.node_fn.size() == 12);
    for (const auto& e : spec.edges) {
        CHECK(e.i < e.j);
        CHECK(std::abs(e.weight) >= 0.7);
        CHECK(std::abs(e.weight) <= 1.3);
    }

    const SemSpec again = make_sem_spec(12, 18, 3.0, 44);
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        CHECK(spec.edges[k].weight == again.edges[k].weight);
        CHECK(spec.edges[k].f == again.edges[k].f);
    }

    const SemSpec back = sem_spec_from_json(sem_spec_to_json(spec));
    CHECK(back.p == spec.p);
    CHECK(back.noise_df == spec.noise_df);
    CHECK(back.seed == spec.seed);
    REQUIRE(back.edges.size() == spec.edges.size());
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        CHECK(back.edges[k].i == spec.edges[k].i);
        CHECK(back.edges[k].j == spec.edges[k].j);
        CHECK(back.edges[k].weight == spec.edges[k].weight);
        CHECK(back.edges[k].f == spec.edges[k].f);
    }
    CHECK(back.node_fn == spec.node_fn);

    CHECK_THROWS_AS(sem_spec_from_json("not json"), DataError);
    CHECK_THROWS_AS(make_sem_spec(5, 3, 0.0, 1), ConfigError);
}

TEST_CASE("sem data: zero-edge specs give uncorrelated columns and the empty skeleton") {
    SemSpec spec;
    spec.p = 3;
    spec.node_fn = {NodeFunction::Identity, NodeFunction::Identity, NodeFunction::Identity};
    spec.noise_df = 8.0;
    spec.seed = 5;
    const SemData out = gen_sem_data(spec, 5000);
    CHECK(out.truth.edge_count() == 0);
    CHECK(abs_corr(out.data.values.col(0), out.data.values.col(1)) < 0.1);
    CHECK(abs_corr(out.data.values.col(0), out.data.values.col(2)) < 0.1);
    CHECK(abs_corr(out.data.values.col(1), out.data.values.col(2)) < 0.1);
}

TEST_CASE("sem data: structural equation wiring checked on the leaky-relu identity region") {
    // Same seed with and without the edge: the noise matrix is identical, so
    // the parent contribution is exactly the difference of the child columns.
    SemSpec connected;
    connected.p = 2;
    connected.node_fn = {NodeFunction::Identity, NodeFunction::Identity};
    connected.noise_df = 5.0;
    connected.seed = 31;
    SemEdge e;
    e.i = 0;
    e.j = 1;
    e.weight = 1.0;
    e.f = EdgeFunction::LeakyRelu;
    connected.edges = {e};

    SemSpec disconnected = connected;
    disconnected.edges.clear();

    const SemData with_edge = gen_sem_data(connected, 400);
    const SemData without = gen_sem_data(disconnected, 400);
    CHECK(with_edge.data.values.col(0) == without.data.values.col(0));
    CHECK(with_edge.truth.has_edge(0, 1));

    for (Eigen::Index r = 0; r < 400; ++r) {
        const double x0 = with_edge.data.values(r, 0);
        const double eps1 = without.data.values(r, 1);
        if (x0 >= 0.0) {
            CHECK(with_edge.data.values(r, 1) == x0 + eps1);
        } else {
            CHECK(with_edge.data.values(r, 1) == doctest::Approx(0.1 * x0 + eps1).epsilon(1e-15));
        }
    }
}

TEST_CASE("sem data: tanh chain carries detectable correlation") {
    SemSpec spec;
    spec.p = 3;
    spec.node_fn = {NodeFunction::Identity, NodeFunction::Identity, NodeFunction::Identity};
    spec.noise_df = 5.0;
    spec.seed = 32;
    SemEdge e01;
    e01.i = 0;
    e01.j = 1;
    e01.weight = 1.0;
    e01.f = EdgeFunction::Tanh;
    SemEdge e12 = e01;
    e12.i = 1;
    e12.j = 2;
    spec.edges = {e01, e12};

    const SemData out = gen_sem_data(spec, 5000);
    Eigen::VectorXd x0 = out.data.values.col(0);
    Eigen::VectorXd x1 = out.data.values.col(1);
    const double corr = sample_cov(x0, x1) /
                        std::sqrt(sample_cov(x0, x0) * sample_cov(x1, x1));
    CHECK(corr > 0.3);
    CHECK(out.truth.edge_list() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("sem data: bitwise reproducible, acyclic by construction, named columns") {
    const SemSpec spec = make_sem_spec(8, 10, 3.0, 77);
    const SemData a = gen_sem_data(spec, 64);
    const SemData b = gen_sem_data(spec, 64);
    CHECK(a.data.values == b.data.values);
    CHECK(a.data.values.allFinite());
    CHECK(a.data.name(0) == "x0");
    CHECK(a.truth.edge_count() == 10);

    SemSpec cyclic = spec;
    cyclic.edges[0].i = 5;
    cyclic.edges[0].j = 2;
    CHECK_THROWS_AS(gen_sem_data(cyclic, 16), ConfigError);
}
