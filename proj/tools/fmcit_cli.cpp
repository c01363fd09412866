#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmcit/bench.hpp"
#include "fmcit/csv.hpp"
#include "fmcit/error.hpp"
#include "fmcit/gpc.hpp"
#include "fmcit/pc.hpp"
#include "fmcit/rng.hpp"
#include "fmcit/skeleton.hpp"
#include "fmcit/stats.hpp"
#include "fmcit/synthetic.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw fmcit::ConfigError("cannot open config file: " + path);
    try {
        json doc;
        in >> doc;
        if (!doc.is_object()) throw fmcit::ConfigError("config root must be a JSON object");
        return doc;
    } catch (const json::exception& e) {
        throw fmcit::ConfigError("bad config JSON in " + path + ": " + e.what());
    }
}

template <typename T>
void maybe(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

void apply_fm_config(const json& j, fmcit::FmTrainConfig& cfg) {
    maybe(j, "epochs", cfg.epochs);
    maybe(j, "batch_size", cfg.batch_size);
    maybe(j, "learning_rate", cfg.learning_rate);
    maybe(j, "standardize", cfg.standardize);
    maybe(j, "hidden_width", cfg.hidden_width);
    maybe(j, "hidden_layers", cfg.hidden_layers);
    if (j.contains("activation")) {
        cfg.activation = fmcit::activation_from_string(j.at("activation").get<std::string>());
    }
}

void apply_rdc_config(const json& j, fmcit::RdcConfig& cfg) {
    maybe(j, "k", cfg.k);
    maybe(j, "s", cfg.s);
    maybe(j, "n_rep", cfg.n_rep);
}

void apply_refine_config(const json& j, fmcit::RefineConfig& cfg) {
    maybe(j, "alpha_scr", cfg.alpha_scr);
    maybe(j, "alpha_fm", cfg.alpha_fm);
    maybe(j, "d_max", cfg.d_max);
    maybe(j, "d_scr_max", cfg.d_scr_max);
    maybe(j, "B0", cfg.B0);
    maybe(j, "B1", cfg.B1);
    maybe(j, "B_max", cfg.B_max);
    maybe(j, "sampling_steps", cfg.sampling_steps);
    maybe(j, "harmonize", cfg.harmonize);
    maybe(j, "train_ratio", cfg.train_ratio);
    if (j.contains("stat_level0")) {
        cfg.stat_level0 = fmcit::statistic_from_string(j.at("stat_level0").get<std::string>());
    }
    if (j.contains("stat_higher")) {
        cfg.stat_higher = fmcit::statistic_from_string(j.at("stat_higher").get<std::string>());
    }
    if (j.contains("rdc")) apply_rdc_config(j.at("rdc"), cfg.rdc);
}

void apply_guidance_config(const json& j, fmcit::GuidanceConfig& cfg) {
    if (j.contains("rule")) {
        cfg.rule = fmcit::guidance_rule_from_string(j.at("rule").get<std::string>());
    }
    maybe(j, "pool_size", cfg.pool_size);
    maybe(j, "budget", cfg.budget);
    maybe(j, "stab_alphas", cfg.stab_alphas);
    maybe(j, "stab_low", cfg.stab_low);
    maybe(j, "stab_high", cfg.stab_high);
    maybe(j, "seed", cfg.seed);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw fmcit::DataError("cannot open for writing: " + path.string());
    return out;
}

std::string join_indices(const std::vector<int>& v, char sep) {
    std::string out;
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (t) out.push_back(sep);
        out += std::to_string(v[t]);
    }
    return out;
}

// ---- cit-bench --------------------------------------------------------------

int run_cit_bench_command(const std::string& config_path, CLI::App* cmd,
                          const std::vector<int>& dz, const std::vector<double>& scales,
                          long long n, int replications, double alpha,
                          const std::vector<std::string>& methods, std::uint64_t seed, int B,
                          int steps, int epochs, double train_ratio, const std::string& out_dir) {
    fmcit::CitBenchRunConfig cfg;
    const json doc = load_config_file(config_path);
    maybe(doc, "d_z", cfg.d_z_values);
    maybe(doc, "scales", cfg.scales);
    if (doc.contains("n")) cfg.n = doc.at("n").get<long long>();
    maybe(doc, "replications", cfg.replications);
    maybe(doc, "alpha", cfg.alpha);
    maybe(doc, "methods", cfg.methods);
    maybe(doc, "seed", cfg.seed);
    maybe(doc, "B", cfg.B);
    maybe(doc, "sampling_steps", cfg.sampling_steps);
    maybe(doc, "train_ratio", cfg.train_ratio);
    maybe(doc, "output_dir", cfg.output_dir);
    if (doc.contains("fm")) apply_fm_config(doc.at("fm"), cfg.fm);

    if (cmd->count("--dz")) cfg.d_z_values = dz;
    if (cmd->count("--scale")) cfg.scales = scales;
    if (cmd->count("--n")) cfg.n = n;
    if (cmd->count("--replications")) cfg.replications = replications;
    if (cmd->count("--alpha")) cfg.alpha = alpha;
    if (cmd->count("--method")) cfg.methods = methods;
    if (cmd->count("--seed")) cfg.seed = seed;
    if (cmd->count("--B")) cfg.B = B;
    if (cmd->count("--steps")) cfg.sampling_steps = steps;
    if (cmd->count("--epochs")) cfg.fm.epochs = epochs;
    if (cmd->count("--train-ratio")) cfg.train_ratio = train_ratio;
    if (cmd->count("--out")) cfg.output_dir = out_dir;

    const fmcit::CitBenchResult result = fmcit::run_cit_benchmark(cfg);
    std::cout << fmcit::cit_table_text(result);
    if (!cfg.output_dir.empty()) {
        std::cout << "wrote results.csv, trials.jsonl, timings.csv to " << cfg.output_dir << "\n";
    }
    return 0;
}

// ---- sem-bench --------------------------------------------------------------

int run_sem_bench_command(const std::string& config_path, CLI::App* cmd, int p, int exp_edges,
                          long long n, double df, int runs,
                          const std::vector<std::string>& methods, double fisherz_alpha,
                          std::uint64_t seed, int epochs, const std::string& out_dir) {
    fmcit::SemBenchRunConfig cfg;
    const json doc = load_config_file(config_path);
    maybe(doc, "p", cfg.p);
    maybe(doc, "exp_edges", cfg.exp_edges);
    if (doc.contains("n")) cfg.n = doc.at("n").get<long long>();
    maybe(doc, "noise_df", cfg.noise_df);
    maybe(doc, "runs", cfg.runs);
    maybe(doc, "methods", cfg.methods);
    maybe(doc, "fisherz_alpha", cfg.fisherz_alpha);
    maybe(doc, "seed", cfg.seed);
    maybe(doc, "output_dir", cfg.output_dir);
    if (doc.contains("refine")) apply_refine_config(doc.at("refine"), cfg.refine);
    if (doc.contains("guidance")) apply_guidance_config(doc.at("guidance"), cfg.guidance);
    if (doc.contains("fm")) apply_fm_config(doc.at("fm"), cfg.fm);

    if (cmd->count("--p")) cfg.p = p;
    if (cmd->count("--exp-edges")) cfg.exp_edges = exp_edges;
    if (cmd->count("--n")) cfg.n = n;
    if (cmd->count("--df")) cfg.noise_df = df;
    if (cmd->count("--runs")) cfg.runs = runs;
    if (cmd->count("--method")) cfg.methods = methods;
    if (cmd->count("--fisherz-alpha")) cfg.fisherz_alpha = fisherz_alpha;
    if (cmd->count("--seed")) cfg.seed = seed;
    if (cmd->count("--epochs")) cfg.fm.epochs = epochs;
    if (cmd->count("--out")) cfg.output_dir = out_dir;

    const fmcit::SemBenchResult result = fmcit::run_sem_benchmark(cfg);
    std::cout << fmcit::sem_table_text(result);
    if (!cfg.output_dir.empty()) {
        std::cout << "wrote results.csv, trials.jsonl, audit.jsonl, timings.csv to "
                  << cfg.output_dir << "\n";
    }
    return 0;
}

// ---- cit (single query) -----------------------------------------------------

int run_cit_command(const std::string& data_path, int i, int j, const std::vector<int>& S,
                    const std::string& method, double alpha, int B, int steps, int epochs,
                    double train_ratio, std::uint64_t seed, const std::string& out_dir) {
    const fmcit::DataMatrix data = fmcit::load_csv(data_path);

    double p_value = 1.0;
    double statistic = 0.0;
    if (method == "fisher_z") {
        const auto res = fmcit::fisher_z_test(data, i, j, S);
        p_value = res.p_value;
        statistic = res.statistic;
    } else if (method == "fmcit") {
        fmcit::FmTrainConfig train_cfg;
        train_cfg.epochs = epochs;
        train_cfg.seed = fmcit::seed_mix(seed, 0x545241494EULL);
        const Eigen::Index n_train = fmcit::split_train_rows(data.rows(), train_ratio);
        const fmcit::VectorFieldModel model =
            fmcit::train_flow_matching(data.head_rows(n_train), train_cfg);
        fmcit::FmcitOptions opt;
        opt.B = B;
        opt.schedule = fmcit::SamplingSchedule::uniform(steps);
        opt.seed = fmcit::seed_mix(seed, 0x54455354ULL);
        opt.train_test_split = train_ratio;
        const auto res = fmcit::fmcit(data, model, i, j, S, opt);
        p_value = res.p_value;
        statistic = res.statistic_observed;
    } else {
        throw fmcit::ConfigError("unknown CIT method: " + method);
    }

    json out;
    out["i"] = i;
    out["j"] = j;
    out["S"] = S;
    out["method"] = method;
    out["alpha"] = alpha;
    out["p_value"] = p_value;
    out["statistic"] = statistic;
    out["reject"] = p_value <= alpha;
    std::cout << out.dump() << "\n";

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        auto results = open_out(std::filesystem::path(out_dir) / "results.csv");
        results << "i,j,S,method,alpha,B,p_value,statistic,reject\n";
        results << i << ',' << j << ',' << join_indices(S, ';') << ',' << method << ','
                << fmcit::format_double(alpha) << ',' << B << ','
                << fmcit::format_double(p_value) << ',' << fmcit::format_double(statistic) << ','
                << (p_value <= alpha ? 1 : 0) << '\n';
    }
    return 0;
}

// ---- skeleton ---------------------------------------------------------------

int run_skeleton_command(const std::string& config_path, CLI::App* cmd,
                         const std::string& data_path, const std::string& method, double alpha,
                         int d_max, int epochs, std::uint64_t seed, const std::string& out_dir) {
    fmcit::RefineConfig refine;
    fmcit::GuidanceConfig guidance;
    fmcit::FmTrainConfig fm;
    const json doc = load_config_file(config_path);
    if (doc.contains("refine")) apply_refine_config(doc.at("refine"), refine);
    if (doc.contains("guidance")) apply_guidance_config(doc.at("guidance"), guidance);
    if (doc.contains("fm")) apply_fm_config(doc.at("fm"), fm);

    if (cmd->count("--d-max")) refine.d_max = d_max;
    if (cmd->count("--epochs")) fm.epochs = epochs;
    if (cmd->count("--seed")) {
        guidance.seed = seed;
        fm.seed = fmcit::seed_mix(seed, 0x464D54ULL);
    }

    const fmcit::DataMatrix data = fmcit::load_csv(data_path);
    const int p = static_cast<int>(data.cols());

    fmcit::Skeleton result(p);
    std::vector<fmcit::AuditRecord> audit;
    if (method == "fisherz-pc") {
        fmcit::FisherZOracle oracle(data);
        result = fmcit::pc_stable_skeleton(p, oracle, alpha, refine.d_max);
    } else if (method == "gpc-fmcit") {
        const fmcit::GpcResult gpc = fmcit::gpc_fmcit(data, refine, guidance, fm);
        result = gpc.skeleton;
        audit = gpc.audit;
    } else {
        throw fmcit::ConfigError("unknown skeleton method: " + method);
    }

    for (auto [a, b] : result.edge_list()) std::cout << a << ' ' << b << "\n";

    if (!out_dir.empty()) {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        fmcit::save_skeleton(result, (dir / "skeleton.txt").string(),
                             (dir / "sepsets.json").string());
        if (method == "gpc-fmcit") {
            fmcit::write_audit_jsonl(audit, (dir / "audit.jsonl").string());
        }
        auto results = open_out(dir / "results.csv");
        results << "i,j\n";
        for (auto [a, b] : result.edge_list()) results << a << ',' << b << '\n';
    }
    return 0;
}

// ---- train-fm ---------------------------------------------------------------

int run_train_fm_command(const std::string& data_path, const std::string& out_path, int epochs,
                         int batch, double lr, int width, int layers, bool no_standardize,
                         std::uint64_t seed) {
    fmcit::FmTrainConfig cfg;
    cfg.epochs = epochs;
    cfg.batch_size = batch;
    cfg.learning_rate = lr;
    cfg.hidden_width = width;
    cfg.hidden_layers = layers;
    cfg.standardize = !no_standardize;
    cfg.seed = seed;

    const fmcit::DataMatrix data = fmcit::load_csv(data_path);
    const fmcit::VectorFieldModel model = fmcit::train_flow_matching(data, cfg);
    fmcit::save_model(model, out_path);

    json out;
    out["checkpoint"] = out_path;
    out["p"] = model.p;
    out["epochs"] = cfg.epochs;
    out["final_train_loss"] = model.train_loss_history.back();
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow-matching conditional independence tests and guided skeleton discovery"};
    app.require_subcommand(1);

    // shared option storage
    std::string config_path, data_path, out_dir, method;
    std::vector<int> dz = {10};
    std::vector<double> scales = {0.50, 0.75, 1.00};
    long long n = 1000;
    int replications = 100, B = 100, steps = 50, epochs = 200, p_nodes = 30, exp_edges = 45,
        runs = 5, d_max = 2, i_col = 0, j_col = 1, batch = 1024, width = 256, layers = 2;
    double alpha = 0.05, train_ratio = 0.5, df = 3.0, fisherz_alpha = 0.03, lr = 1e-3;
    std::uint64_t seed = 0;
    std::vector<int> S;
    std::vector<std::string> methods;
    bool no_standardize = false;
    std::string out_path = "model.json";

    auto* cit_bench = app.add_subcommand("cit-bench", "type-I error / power benchmark");
    cit_bench->add_option("--config", config_path, "JSON config file");
    cit_bench->add_option("--dz", dz, "conditioning dimensions")->delimiter(',');
    cit_bench->add_option("--scale", scales, "noise scales")->delimiter(',');
    cit_bench->add_option("--n", n, "samples per dataset");
    cit_bench->add_option("--replications", replications, "trials per hypothesis");
    cit_bench->add_option("--alpha", alpha, "rejection threshold");
    cit_bench->add_option("--method", methods, "fmcit|fmcit_shuffled|fisher_z|const:<p>")
        ->delimiter(',');
    cit_bench->add_option("--seed", seed, "base seed");
    cit_bench->add_option("--B", B, "CRT repeats");
    cit_bench->add_option("--steps", steps, "imputation grid length");
    cit_bench->add_option("--epochs", epochs, "training epochs");
    cit_bench->add_option("--train-ratio", train_ratio, "train split fraction");
    cit_bench->add_option("--out", out_dir, "output directory");

    auto* sem_bench = app.add_subcommand("sem-bench", "skeleton-recovery benchmark");
    sem_bench->add_option("--config", config_path, "JSON config file");
    sem_bench->add_option("--p", p_nodes, "node count");
    sem_bench->add_option("--exp-edges", exp_edges, "edge count");
    sem_bench->add_option("--n", n, "samples");
    sem_bench->add_option("--df", df, "noise degrees of freedom");
    sem_bench->add_option("--runs", runs, "replication count");
    sem_bench->add_option("--method", methods, "fisherz_pc|gpc_fmcit|oracle_pc")->delimiter(',');
    sem_bench->add_option("--fisherz-alpha", fisherz_alpha, "baseline PC alpha");
    sem_bench->add_option("--seed", seed, "base seed");
    sem_bench->add_option("--epochs", epochs, "training epochs");
    sem_bench->add_option("--out", out_dir, "output directory");

    auto* cit = app.add_subcommand("cit", "single CI test on a CSV");
    cit->add_option("--data", data_path, "input CSV")->required();
    cit->add_option("--i", i_col, "first column index")->required();
    cit->add_option("--j", j_col, "second column index")->required();
    cit->add_option("--S", S, "conditioning column indices")->delimiter(',');
    cit->add_option("--method", method, "fmcit|fisher_z")->default_val("fmcit");
    cit->add_option("--alpha", alpha, "rejection threshold");
    cit->add_option("--B", B, "CRT repeats");
    cit->add_option("--steps", steps, "imputation grid length");
    cit->add_option("--epochs", epochs, "training epochs");
    cit->add_option("--train-ratio", train_ratio, "train split fraction");
    cit->add_option("--seed", seed, "seed");
    cit->add_option("--out", out_dir, "output directory");

    auto* skeleton = app.add_subcommand("skeleton", "skeleton discovery on a CSV");
    skeleton->add_option("--config", config_path, "JSON config file");
    skeleton->add_option("--data", data_path, "input CSV")->required();
    skeleton->add_option("--method", method, "fisherz-pc|gpc-fmcit")->default_val("fisherz-pc");
    skeleton->add_option("--alpha", alpha, "fisher-z alpha");
    skeleton->add_option("--d-max", d_max, "max conditioning size");
    skeleton->add_option("--epochs", epochs, "training epochs (gpc)");
    skeleton->add_option("--seed", seed, "seed (gpc)");
    skeleton->add_option("--out", out_dir, "output directory");

    auto* train_fm = app.add_subcommand("train-fm", "train a vector-field checkpoint");
    train_fm->add_option("--data", data_path, "input CSV")->required();
    train_fm->add_option("--out", out_path, "checkpoint path");
    train_fm->add_option("--epochs", epochs, "training epochs");
    train_fm->add_option("--batch", batch, "batch size");
    train_fm->add_option("--lr", lr, "learning rate");
    train_fm->add_option("--width", width, "hidden width");
    train_fm->add_option("--layers", layers, "hidden layers");
    train_fm->add_flag("--no-standardize", no_standardize, "train on raw columns");
    train_fm->add_option("--seed", seed, "seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cit_bench->parsed()) {
            return run_cit_bench_command(config_path, cit_bench, dz, scales, n, replications,
                                         alpha, methods, seed, B, steps, epochs, train_ratio,
                                         out_dir);
        }
        if (sem_bench->parsed()) {
            return run_sem_bench_command(config_path, sem_bench, p_nodes, exp_edges, n, df, runs,
                                         methods, fisherz_alpha, seed, epochs, out_dir);
        }
        if (cit->parsed()) {
            return run_cit_command(data_path, i_col, j_col, S, method, alpha, B, steps, epochs,
                                   train_ratio, seed, out_dir);
        }
        if (skeleton->parsed()) {
            return run_skeleton_command(config_path, skeleton, data_path, method, alpha, d_max,
                                        epochs, seed, out_dir);
        }
        if (train_fm->parsed()) {
            return run_train_fm_command(data_path, out_path, epochs, batch, lr, width, layers,
                                        no_standardize, seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
}
