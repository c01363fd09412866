#include "fmcit/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fmcit/csv.hpp"
#include "fmcit/dsep.hpp"
#include "fmcit/error.hpp"
#include "fmcit/pc.hpp"
#include "fmcit/rng.hpp"
#include "fmcit/synthetic.hpp"
#include "json.hpp"

namespace fmcit {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    return out;
}

bool is_const_method(const std::string& m, double* p_out) {
    if (m.rfind("const:", 0) != 0) return false;
    const std::string arg = m.substr(6);
    char* end = nullptr;
    const double v = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size() || !(v >= 0.0 && v <= 1.0)) {
        throw ConfigError("const method needs a p-value in [0,1], got '" + arg + "'");
    }
    *p_out = v;
    return true;
}

std::uint64_t scale_bits(double s) { return std::bit_cast<std::uint64_t>(s); }

}  // namespace

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
               static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double acc = 0.0;
    for (double v : values) acc += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
    return out;
}

CitBenchResult run_cit_benchmark(const CitBenchRunConfig& cfg) {
    if (cfg.replications < 1) throw ConfigError("replication count must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    if (cfg.methods.empty()) throw ConfigError("no methods selected");
    if (cfg.B < 1) throw ConfigError("CRT repeat count must be >= 1");
    if (cfg.sampling_steps < 1) throw ConfigError("sampling grid needs at least one step");
    if (!(cfg.train_ratio > 0.0 && cfg.train_ratio < 1.0)) {
        throw ConfigError("train ratio must lie in (0,1)");
    }

    SamplingSchedule schedule = SamplingSchedule::uniform(cfg.sampling_steps);
    schedule.harmonize = cfg.harmonize;
    CitBenchResult result;

    for (int d_z : cfg.d_z_values) {
        std::vector<int> cond(static_cast<std::size_t>(d_z));
        std::iota(cond.begin(), cond.end(), 2);  // z-columns sit after x, y

        for (double s : cfg.scales) {
            for (const auto& method : cfg.methods) {
                double const_p = 0.0;
                const bool constant = is_const_method(method, &const_p);
                int rejects[2] = {0, 0};
                double runtime_sum = 0.0;

                for (int hyp = 0; hyp < 2; ++hyp) {
                    for (int trial = 0; trial < cfg.replications; ++trial) {
                        const std::uint64_t trial_seed =
                            seed_mix({cfg.seed, static_cast<std::uint64_t>(d_z), scale_bits(s),
                                      static_cast<std::uint64_t>(hyp),
                                      static_cast<std::uint64_t>(trial)});
                        CitBenchConfig gen;
                        gen.d_z = d_z;
                        gen.n = cfg.n;
                        gen.scale = s;
                        gen.alternative = hyp == 1;
                        gen.seed = trial_seed;
                        const DataMatrix data = cit_dataset_to_matrix(gen_cit_benchmark(gen));

                        const auto t0 = clock_type::now();
                        double p_value;
                        if (constant) {
                            p_value = const_p;
                        } else if (method == "fisher_z") {
                            p_value = fisher_z_test(data, 0, 1, cond).p_value;
                        } else if (method == "fmcit" || method == "fmcit_shuffled") {
                            FmTrainConfig train_cfg = cfg.fm;
                            train_cfg.seed = seed_mix(trial_seed, 0x545241494EULL);
                            const Eigen::Index n_train =
                                split_train_rows(data.rows(), cfg.train_ratio);
                            const VectorFieldModel model =
                                train_flow_matching(data.head_rows(n_train), train_cfg);
                            FmcitOptions opt;
                            opt.B = cfg.B;
                            opt.statistic = method == "fmcit" ? Statistic::Rdc
                                                              : Statistic::RdcShuffled;
                            opt.schedule = schedule;
                            opt.seed = seed_mix(trial_seed, 0x54455354ULL);
                            opt.train_test_split = cfg.train_ratio;
                            p_value = fmcit(data, model, 0, 1, cond, opt).p_value;
                        } else {
                            throw ConfigError("unknown CIT method: " + method);
                        }
                        const double runtime = seconds_since(t0);

                        const bool reject = p_value <= cfg.alpha;
                        rejects[hyp] += reject ? 1 : 0;
                        runtime_sum += runtime;
                        result.trials.push_back({d_z, s, method, hyp == 1, trial, trial_seed,
                                                 p_value, reject, runtime});
                    }
                }

                CitCell cell;
                cell.d_z = d_z;
                cell.scale = s;
                cell.method = method;
                cell.type1_error = static_cast<double>(rejects[0]) / cfg.replications;
                cell.power = static_cast<double>(rejects[1]) / cfg.replications;
                cell.mean_runtime_seconds = runtime_sum / (2.0 * cfg.replications);
                result.cells.push_back(std::move(cell));
            }
        }
    }

    if (!cfg.output_dir.empty()) {
        const std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);

        auto results = open_out(dir / "results.csv");
        results << "d_z,s,method,type1_error,power\n";
        for (const auto& c : result.cells) {
            results << c.d_z << ',' << format_double(c.scale) << ',' << c.method << ','
                    << format_double(c.type1_error) << ',' << format_double(c.power) << '\n';
        }

        auto timings = open_out(dir / "timings.csv");
        timings << "d_z,s,method,mean_runtime_seconds\n";
        for (const auto& c : result.cells) {
            timings << c.d_z << ',' << format_double(c.scale) << ',' << c.method << ','
                    << format_double(c.mean_runtime_seconds) << '\n';
        }

        auto trials = open_out(dir / "trials.jsonl");
        for (const auto& t : result.trials) {
            nlohmann::json row;
            row["bench"] = "cit";
            row["d_z"] = t.d_z;
            row["s"] = t.scale;
            row["method"] = t.method;
            row["hypothesis"] = t.alternative ? "H1" : "H0";
            row["trial"] = t.trial;
            row["seed"] = t.seed;
            row["alpha"] = cfg.alpha;
            row["p_value"] = t.p_value;
            row["reject"] = t.reject;
            row["runtime_seconds"] = t.runtime_seconds;
            trials << row.dump() << '\n';
        }
    }
    return result;
}

std::string cit_table_text(const CitBenchResult& result) {
    std::ostringstream out;
    out << "d_z     s  method           type-I   power  mean-sec\n";
    char line[160];
    for (const auto& c : result.cells) {
        std::snprintf(line, sizeof line, "%3d  %4.2f  %-15s  %6.3f  %6.3f  %8.2f\n", c.d_z,
                      c.scale, c.method.c_str(), c.type1_error, c.power,
                      c.mean_runtime_seconds);
        out << line;
    }
    return out.str();
}

SemBenchResult run_sem_benchmark(const SemBenchRunConfig& cfg) {
    if (cfg.runs < 1) throw ConfigError("run count must be >= 1");
    if (cfg.methods.empty()) throw ConfigError("no methods selected");
    if (!(cfg.fisherz_alpha > 0.0 && cfg.fisherz_alpha < 1.0)) {
        throw ConfigError("fisher-z alpha must lie in (0,1)");
    }

    SemBenchResult result;
    for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t run_seed = cfg.seed + static_cast<std::uint64_t>(run);
        const SemSpec spec = make_sem_spec(cfg.p, cfg.exp_edges, cfg.noise_df, run_seed);
        const SemData sem = gen_sem_data(spec, cfg.n);

        std::vector<std::pair<int, int>> dag;
        dag.reserve(spec.edges.size());
        for (const auto& e : spec.edges) dag.emplace_back(e.i, e.j);

        for (const auto& method : cfg.methods) {
            SemRunRow row;
            row.method = method;
            row.run = run;
            row.run_seed = run_seed;

            const auto t0 = clock_type::now();
            if (method == "fisherz_pc") {
                FisherZOracle oracle(sem.data);
                const Skeleton est =
                    pc_stable_skeleton(cfg.p, oracle, cfg.fisherz_alpha, cfg.refine.d_max);
                row.metrics = skeleton_metrics(est, sem.truth);
            } else if (method == "gpc_fmcit") {
                GuidanceConfig gcfg = cfg.guidance;
                gcfg.seed = seed_mix(run_seed, 0x475043ULL);
                FmTrainConfig fm_cfg = cfg.fm;
                fm_cfg.seed = seed_mix(run_seed, 0x464D54ULL);
                const GpcResult gpc = gpc_fmcit(sem.data, cfg.refine, gcfg, fm_cfg);
                row.metrics = skeleton_metrics(gpc.skeleton, sem.truth);
                row.screening_edges = gpc.screening.edge_count();
                row.total_queries = gpc.audit.size();
                row.budget_bound = static_cast<std::size_t>(cfg.refine.d_max + 1) *
                                   static_cast<std::size_t>(cfg.guidance.budget) *
                                   row.screening_edges;
                for (const auto& rec : gpc.audit) result.audit.emplace_back(run, rec);
            } else if (method == "oracle_pc") {
                // exact d-separation upper bound; full depth so PC is exact
                DSepOracle oracle(cfg.p, dag);
                const Skeleton est =
                    pc_stable_skeleton(cfg.p, oracle, 0.5, std::max(cfg.p - 2, 0));
                row.metrics = skeleton_metrics(est, sem.truth);
            } else {
                throw ConfigError("unknown skeleton method: " + method);
            }
            row.metrics.runtime_seconds = seconds_since(t0);
            result.rows.push_back(std::move(row));
        }
    }

    if (!cfg.output_dir.empty()) {
        const std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);

        auto results = open_out(dir / "results.csv");
        results << "method,precision_mean,precision_std,recall_mean,recall_std,"
                   "f1_mean,f1_std,shd_mean,shd_std,queries_mean\n";
        for (const auto& method : cfg.methods) {
            std::vector<double> prec, rec, f1, shd, queries;
            for (const auto& row : result.rows) {
                if (row.method != method) continue;
                prec.push_back(row.metrics.precision);
                rec.push_back(row.metrics.recall);
                f1.push_back(row.metrics.f1);
                shd.push_back(static_cast<double>(row.metrics.shd));
                queries.push_back(static_cast<double>(row.total_queries));
            }
            const auto p = mean_std(prec), r = mean_std(rec), f = mean_std(f1),
                       h = mean_std(shd), q = mean_std(queries);
            results << method << ',' << format_double(p.mean) << ',' << format_double(p.stddev)
                    << ',' << format_double(r.mean) << ',' << format_double(r.stddev) << ','
                    << format_double(f.mean) << ',' << format_double(f.stddev) << ','
                    << format_double(h.mean) << ',' << format_double(h.stddev) << ','
                    << format_double(q.mean) << '\n';
        }

        auto timings = open_out(dir / "timings.csv");
        timings << "method,mean_runtime_seconds\n";
        for (const auto& method : cfg.methods) {
            std::vector<double> secs;
            for (const auto& row : result.rows) {
                if (row.method == method) secs.push_back(row.metrics.runtime_seconds);
            }
            timings << method << ',' << format_double(mean_std(secs).mean) << '\n';
        }

        auto trials = open_out(dir / "trials.jsonl");
        for (const auto& row : result.rows) {
            nlohmann::json rec;
            rec["bench"] = "sem";
            rec["method"] = row.method;
            rec["run"] = row.run;
            rec["seed"] = row.run_seed;
            rec["precision"] = row.metrics.precision;
            rec["recall"] = row.metrics.recall;
            rec["f1"] = row.metrics.f1;
            rec["shd"] = row.metrics.shd;
            rec["runtime_seconds"] = row.metrics.runtime_seconds;
            if (row.method == "gpc_fmcit") {
                rec["screening_edges"] = row.screening_edges;
                rec["total_queries"] = row.total_queries;
                rec["budget_bound"] = row.budget_bound;
            }
            trials << rec.dump() << '\n';
        }

        auto audit = open_out(dir / "audit.jsonl");
        for (const auto& [run, rec] : result.audit) {
            nlohmann::json row = nlohmann::json::parse(audit_record_to_json(rec));
            row["run"] = run;
            audit << row.dump() << '\n';
        }
    }
    return result;
}

std::string sem_table_text(const SemBenchResult& result) {
    std::map<std::string, std::vector<const SemRunRow*>> by_method;
    std::vector<std::string> order;
    for (const auto& row : result.rows) {
        if (by_method.find(row.method) == by_method.end()) order.push_back(row.method);
        by_method[row.method].push_back(&row);
    }
    std::ostringstream out;
    out << "method        F1 (mean+-std)     SHD (mean+-std)    mean-sec\n";
    char line[160];
    for (const auto& method : order) {
        std::vector<double> f1, shd, secs;
        for (const auto* row : by_method[method]) {
            f1.push_back(row->metrics.f1);
            shd.push_back(static_cast<double>(row->metrics.shd));
            secs.push_back(row->metrics.runtime_seconds);
        }
        const auto f = mean_std(f1), h = mean_std(shd), t = mean_std(secs);
        std::snprintf(line, sizeof line, "%-12s  %6.3f +- %5.3f   %7.1f +- %5.1f  %9.2f\n",
                      method.c_str(), f.mean, f.stddev, h.mean, h.stddev, t.mean);
        out << line;
    }
    return out.str();
}

}  // namespace fmcit
