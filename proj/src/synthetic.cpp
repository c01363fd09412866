#include "fmcit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fmcit/error.hpp"
#include "fmcit/rng.hpp"
#include "json.hpp"

namespace fmcit {

namespace {

constexpr std::uint64_t kCitStreamTag = 0x43495442ULL;
constexpr std::uint64_t kDagStreamTag = 0x44414721ULL;
constexpr std::uint64_t kSpecStreamTag = 0x53504543ULL;
constexpr std::uint64_t kSemDataTag = 0x53454D44ULL;

void validate_cit_config(const CitBenchConfig& cfg) {
    if (cfg.d_z < 1) throw ConfigError("conditioning dimension must be >= 1");
    if (cfg.n < 10) throw ConfigError("benchmark sample size must be >= 10");
    // scale 0 is the degenerate noiseless limit; negative scales are nonsense
    if (!(cfg.scale >= 0.0)) throw ConfigError("noise scale must be >= 0");
}

CitDataset gen_cit_core(const CitBenchConfig& cfg, CitFunction f1, CitFunction f2,
                        std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CitDataset ds;
    ds.alternative = cfg.alternative;
    ds.f1 = f1;
    ds.f2 = f2;
    ds.z.resize(cfg.n, cfg.d_z);
    ds.x.resize(cfg.n);
    ds.y.resize(cfg.n);
    for (Eigen::Index r = 0; r < cfg.n; ++r) {
        for (int c = 0; c < cfg.d_z; ++c) ds.z(r, c) = gauss(rng);
        const double m = ds.z.row(r).mean();
        const double eps_x = gauss(rng);
        const double eps_y = gauss(rng);
        const double shared = 0.5 * gauss(rng);  // e_b, added post-nonlinearity under H1
        ds.x[r] = apply_cit_function(f1, m + cfg.scale * eps_x);
        ds.y[r] = apply_cit_function(f2, m + cfg.scale * eps_y);
        if (cfg.alternative) {
            ds.x[r] += shared;
            ds.y[r] += shared;
        }
    }
    return ds;
}

// Student-t via gaussian / sqrt(chi2/df); draw order is (normal, chi2).
double student_t_draw(std::mt19937_64& rng, double df) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::gamma_distribution<double> gamma(df / 2.0, 2.0);  // chi-square(df)
    const double z = gauss(rng);
    const double chi2 = gamma(rng);
    return z / std::sqrt(chi2 / df);
}

}  // namespace

double apply_cit_function(CitFunction f, double u) {
    switch (f) {
        case CitFunction::Identity: return u;
        case CitFunction::Square: return u * u;
        case CitFunction::Cos: return std::cos(u);
        case CitFunction::Cube: return u * u * u;
        case CitFunction::Tanh: return std::tanh(u);
    }
    throw ConfigError("unknown outer function tag");
}

std::string to_string(CitFunction f) {
    switch (f) {
        case CitFunction::Identity: return "identity";
        case CitFunction::Square: return "square";
        case CitFunction::Cos: return "cos";
        case CitFunction::Cube: return "cube";
        case CitFunction::Tanh: return "tanh";
    }
    throw ConfigError("unknown outer function tag");
}

CitDataset gen_cit_benchmark(const CitBenchConfig& cfg) {
    validate_cit_config(cfg);
    std::mt19937_64 rng(seed_mix(cfg.seed, kCitStreamTag));
    std::uniform_int_distribution<int> pick(0, 4);
    const auto f1 = static_cast<CitFunction>(pick(rng));
    const auto f2 = static_cast<CitFunction>(pick(rng));
    return gen_cit_core(cfg, f1, f2, rng);
}

CitDataset gen_cit_benchmark_with(const CitBenchConfig& cfg, CitFunction f1, CitFunction f2) {
    validate_cit_config(cfg);
    std::mt19937_64 rng(seed_mix(cfg.seed, kCitStreamTag));
    return gen_cit_core(cfg, f1, f2, rng);
}

DataMatrix cit_dataset_to_matrix(const CitDataset& ds) {
    DataMatrix out;
    const Eigen::Index n = ds.x.size();
    out.values.resize(n, 2 + ds.z.cols());
    out.values.col(0) = ds.x;
    out.values.col(1) = ds.y;
    out.values.rightCols(ds.z.cols()) = ds.z;
    out.names = {"x", "y"};
    for (Eigen::Index c = 0; c < ds.z.cols(); ++c) {
        out.names.push_back("z" + std::to_string(c + 1));
    }
    return out;
}

double apply_edge_function(EdgeFunction f, double u) {
    switch (f) {
        case EdgeFunction::Tanh: return std::tanh(u);
        case EdgeFunction::Sin: return std::sin(u);
        case EdgeFunction::Quadratic: return 0.5 * u * u;
        case EdgeFunction::SignedSqrt: return std::copysign(std::sqrt(std::abs(u)), u);
        case EdgeFunction::LeakyRelu: return u >= 0.0 ? u : 0.1 * u;
    }
    throw ConfigError("unknown edge function tag");
}

double apply_node_function(NodeFunction g, double u) {
    switch (g) {
        case NodeFunction::Identity: return u;
        case NodeFunction::Tanh: return std::tanh(u);
        case NodeFunction::ClippedSinh: return std::sinh(std::clamp(u, -3.0, 3.0));
        case NodeFunction::SignedLog1p: return std::copysign(std::log1p(std::abs(u)), u);
    }
    throw ConfigError("unknown node function tag");
}

std::string to_string(EdgeFunction f) {
    switch (f) {
        case EdgeFunction::Tanh: return "tanh";
        case EdgeFunction::Sin: return "sin";
        case EdgeFunction::Quadratic: return "quadratic";
        case EdgeFunction::SignedSqrt: return "signed_sqrt";
        case EdgeFunction::LeakyRelu: return "leaky_relu";
    }
    throw ConfigError("unknown edge function tag");
}

std::string to_string(NodeFunction g) {
    switch (g) {
        case NodeFunction::Identity: return "identity";
        case NodeFunction::Tanh: return "tanh";
        case NodeFunction::ClippedSinh: return "clipped_sinh";
        case NodeFunction::SignedLog1p: return "signed_log1p";
    }
    throw ConfigError("unknown node function tag");
}

EdgeFunction edge_function_from_string(const std::string& s) {
    if (s == "tanh") return EdgeFunction::Tanh;
    if (s == "sin") return EdgeFunction::Sin;
    if (s == "quadratic") return EdgeFunction::Quadratic;
    if (s == "signed_sqrt") return EdgeFunction::SignedSqrt;
    if (s == "leaky_relu") return EdgeFunction::LeakyRelu;
    throw ConfigError("unknown edge function: " + s);
}

NodeFunction node_function_from_string(const std::string& s) {
    if (s == "identity") return NodeFunction::Identity;
    if (s == "tanh") return NodeFunction::Tanh;
    if (s == "clipped_sinh") return NodeFunction::ClippedSinh;
    if (s == "signed_log1p") return NodeFunction::SignedLog1p;
    throw ConfigError("unknown node function: " + s);
}

std::vector<std::pair<int, int>> gen_random_dag(int p, int exp_edges, std::uint64_t seed) {
    if (p < 2) throw ConfigError("a DAG with edges needs at least 2 nodes");
    const long long max_edges = static_cast<long long>(p) * (p - 1) / 2;
    if (exp_edges < 0 || exp_edges > max_edges) {
        throw ConfigError("edge count must lie in [0, p(p-1)/2]");
    }

    // Floyd's sampler: uniform exp_edges-subset of the p(p-1)/2 candidates.
    std::mt19937_64 rng(seed_mix(seed, kDagStreamTag));
    std::set<long long> chosen;
    for (long long t = max_edges - exp_edges; t < max_edges; ++t) {
        std::uniform_int_distribution<long long> pick(0, t);
        const long long r = pick(rng);
        chosen.insert(chosen.count(r) ? t : r);
    }

    std::vector<std::pair<int, int>> edges;
    edges.reserve(chosen.size());
    for (long long index : chosen) {
        // candidate pairs (i, j), i < j, enumerated lexicographically
        long long rest = index;
        int i = 0;
        while (rest >= p - 1 - i) {
            rest -= p - 1 - i;
            ++i;
        }
        edges.emplace_back(i, i + 1 + static_cast<int>(rest));
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

SemSpec make_sem_spec(int p, int exp_edges, double noise_df, std::uint64_t seed) {
    if (!(noise_df > 0.0)) throw ConfigError("noise degrees of freedom must be positive");
    SemSpec spec;
    spec.p = p;
    spec.noise_df = noise_df;
    spec.seed = seed;

    const auto dag = gen_random_dag(p, exp_edges, seed);
    std::mt19937_64 rng(seed_mix(seed, kSpecStreamTag));
    std::uniform_real_distribution<double> mag(0.7, 1.3);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> edge_pick(0, 4);
    std::uniform_int_distribution<int> node_pick(0, 3);

    spec.edges.reserve(dag.size());
    for (auto [i, j] : dag) {
        SemEdge e;
        e.i = i;
        e.j = j;
        e.weight = (coin(rng) == 0 ? 1.0 : -1.0) * mag(rng);
        e.f = static_cast<EdgeFunction>(edge_pick(rng));
        spec.edges.push_back(e);
    }
    spec.node_fn.reserve(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) {
        spec.node_fn.push_back(static_cast<NodeFunction>(node_pick(rng)));
    }
    return spec;
}

SemData gen_sem_data(const SemSpec& spec, Eigen::Index n) {
    if (spec.p < 1) throw ConfigError("SEM needs at least one node");
    if (n < 1) throw ConfigError("SEM sample size must be >= 1");
    if (static_cast<int>(spec.node_fn.size()) != spec.p) {
        throw ConfigError("node function list does not cover the node set");
    }
    for (const auto& e : spec.edges) {
        if (e.i < 0 || e.j >= spec.p || e.i >= e.j) {
            throw ConfigError("SEM edges must satisfy 0 <= i < j < p");
        }
    }

    // Noise drawn column by column, then nodes filled in topological order.
    std::mt19937_64 rng(seed_mix(spec.seed, kSemDataTag));
    Eigen::MatrixXd noise(n, spec.p);
    for (int jcol = 0; jcol < spec.p; ++jcol) {
        for (Eigen::Index r = 0; r < n; ++r) noise(r, jcol) = student_t_draw(rng, spec.noise_df);
    }

    SemData out;
    out.data.values.resize(n, spec.p);
    out.truth = Skeleton(spec.p);
    std::vector<std::vector<const SemEdge*>> parents(static_cast<std::size_t>(spec.p));
    for (const auto& e : spec.edges) {
        parents[static_cast<std::size_t>(e.j)].push_back(&e);
        out.truth.add_edge(e.i, e.j);
    }

    for (int jcol = 0; jcol < spec.p; ++jcol) {
        const NodeFunction g = spec.node_fn[static_cast<std::size_t>(jcol)];
        for (Eigen::Index r = 0; r < n; ++r) {
            double acc = noise(r, jcol);
            for (const SemEdge* e : parents[static_cast<std::size_t>(jcol)]) {
                acc += e->weight * apply_edge_function(e->f, out.data.values(r, e->i));
            }
            out.data.values(r, jcol) = apply_node_function(g, acc);
        }
    }
    if (!out.data.values.allFinite()) throw DataError("SEM generated a non-finite value");
    out.data.names = default_column_names(spec.p);
    return out;
}

std::string sem_spec_to_json(const SemSpec& spec) {
    nlohmann::json doc;
    doc["p"] = spec.p;
    doc["noise_df"] = spec.noise_df;
    doc["seed"] = spec.seed;
    auto& edges = doc["edges"] = nlohmann::json::array();
    for (const auto& e : spec.edges) {
        edges.push_back(
            {{"i", e.i}, {"j", e.j}, {"weight", e.weight}, {"f", to_string(e.f)}});
    }
    auto& nodes = doc["node_fn"] = nlohmann::json::array();
    for (auto g : spec.node_fn) nodes.push_back(to_string(g));
    return doc.dump();
}

SemSpec sem_spec_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad SEM spec JSON: ") + e.what());
    }
    SemSpec spec;
    spec.p = doc.at("p").get<int>();
    spec.noise_df = doc.at("noise_df").get<double>();
    spec.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& rec : doc.at("edges")) {
        SemEdge e;
        e.i = rec.at("i").get<int>();
        e.j = rec.at("j").get<int>();
        e.weight = rec.at("weight").get<double>();
        e.f = edge_function_from_string(rec.at("f").get<std::string>());
        spec.edges.push_back(e);
    }
    for (const auto& name : doc.at("node_fn")) {
        spec.node_fn.push_back(node_function_from_string(name.get<std::string>()));
    }
    return spec;
}

}  // namespace fmcit
