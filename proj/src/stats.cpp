#include "fmcit/stats.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "fmcit/error.hpp"
#include "fmcit/rng.hpp"
#include "json.hpp"

namespace fmcit {

namespace {

// Average-rank copula transform: rank/n with ties sharing their mean rank.
Eigen::VectorXd copula_transform(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&x](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });

    Eigen::VectorXd out(n);
    Eigen::Index run_start = 0;
    while (run_start < n) {
        Eigen::Index run_end = run_start + 1;
        while (run_end < n && x[order[static_cast<std::size_t>(run_end)]] ==
                                  x[order[static_cast<std::size_t>(run_start)]]) {
            ++run_end;
        }
        // 1-based ranks run_start+1 .. run_end averaged
        const double mean_rank = 0.5 * static_cast<double>(run_start + run_end + 1);
        for (Eigen::Index k = run_start; k < run_end; ++k) {
            out[order[static_cast<std::size_t>(k)]] = mean_rank / static_cast<double>(n);
        }
        run_start = run_end;
    }
    return out;
}

// n x k block of sin(w . [u, 1] + b) features with w ~ (s/2) N(0, I), b ~ U(0, 2pi).
Eigen::MatrixXd sine_features(const Eigen::VectorXd& u, int k, double s, std::mt19937_64& rng) {
    const Eigen::Index n = u.size();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double scale = s / 2.0;  // input is [copula value, 1], dimension 2

    Eigen::MatrixXd feats(n, k);
    for (int f = 0; f < k; ++f) {
        const double w0 = scale * gauss(rng);
        const double w1 = scale * gauss(rng);
        const double b = two_pi * unif(rng);
        feats.col(f) = ((u.array() * w0) + (w1 + b)).sin();
    }
    return feats;
}

// Inverse square root of a symmetric PSD matrix, eigenvalues floored away from 0.
Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(1e-12);
    return eig.eigenvectors() * vals.cwiseInverse().cwiseSqrt().asDiagonal() *
           eig.eigenvectors().transpose();
}

// Largest canonical correlation between two centered feature blocks,
// each covariance ridged before whitening.
double max_canonical_corr(Eigen::MatrixXd fx, Eigen::MatrixXd fy) {
    const Eigen::Index n = fx.rows();
    if (n < 2) throw DataError("canonical correlation needs at least 2 rows");
    fx.rowwise() -= fx.colwise().mean();
    fy.rowwise() -= fy.colwise().mean();
    const double denom = static_cast<double>(n - 1);
    constexpr double ridge = 1e-6;

    Eigen::MatrixXd cxx = fx.transpose() * fx / denom;
    Eigen::MatrixXd cyy = fy.transpose() * fy / denom;
    cxx.diagonal().array() += ridge;
    cyy.diagonal().array() += ridge;
    const Eigen::MatrixXd cxy = fx.transpose() * fy / denom;

    const Eigen::MatrixXd m = inv_sqrt_psd(cxx) * cxy * inv_sqrt_psd(cyy);
    const double top = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
    return std::clamp(top, 0.0, 1.0);
}

void check_cit_indices(Eigen::Index p, int i, int j, const std::vector<int>& S) {
    auto in_range = [p](int c) { return c >= 0 && c < p; };
    if (!in_range(i) || !in_range(j)) throw ConfigError("test column index out of range");
    if (i == j) throw ConfigError("test columns i and j must differ");
    for (int c : S) {
        if (!in_range(c)) throw ConfigError("conditioning column index out of range");
        if (c == i || c == j) throw ConfigError("conditioning set overlaps tested columns");
    }
}

}  // namespace

double rdc(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const RdcConfig& cfg) {
    if (x.size() != y.size()) throw DimensionError("rdc inputs differ in length");
    if (x.size() < 3) throw DataError("rdc needs at least 3 samples");
    if (cfg.k < 1 || cfg.n_rep < 1) throw ConfigError("rdc needs k >= 1 and n_rep >= 1");
    if (!(cfg.s > 0)) throw ConfigError("rdc projection scale must be positive");
    // a flat input has no copula variation to correlate with anything
    if (x.minCoeff() == x.maxCoeff() || y.minCoeff() == y.maxCoeff()) return 0.0;

    const Eigen::VectorXd ux = copula_transform(x);
    const Eigen::VectorXd uy = copula_transform(y);

    double best = 0.0;
    for (int rep = 0; rep < cfg.n_rep; ++rep) {
        std::mt19937_64 rng(seed_mix(cfg.seed, static_cast<std::uint64_t>(rep)));
        const Eigen::MatrixXd fx = sine_features(ux, cfg.k, cfg.s, rng);
        const Eigen::MatrixXd fy = sine_features(uy, cfg.k, cfg.s, rng);
        best = std::max(best, max_canonical_corr(fx, fy));
    }
    return best;
}

double abs_corr(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) throw DimensionError("abs_corr inputs differ in length");
    if (x.size() < 2) throw DataError("abs_corr needs at least 2 samples");
    const Eigen::ArrayXd xc = x.array() - x.mean();
    const Eigen::ArrayXd yc = y.array() - y.mean();
    const double nx = std::sqrt((xc * xc).sum());
    const double ny = std::sqrt((yc * yc).sum());
    if (nx == 0.0 || ny == 0.0) return 0.0;
    return std::min(std::abs((xc * yc).sum() / (nx * ny)), 1.0);
}

FisherZOutcome fisher_z_test(const DataMatrix& data, int i, int j, const std::vector<int>& S) {
    const Eigen::Index n = data.rows();
    const auto ell = static_cast<Eigen::Index>(S.size());
    check_cit_indices(data.cols(), i, j, S);
    if (n <= ell + 3) throw ConfigError("fisher_z_test needs n > |S| + 3");

    FisherZOutcome out;
    out.degenerate = true;  // cleared once a usable partial correlation exists

    // Correlation matrix over columns [i, j, S...].
    std::vector<int> cols{i, j};
    cols.insert(cols.end(), S.begin(), S.end());
    const auto d = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd sub(n, d);
    for (Eigen::Index c = 0; c < d; ++c) sub.col(c) = data.values.col(cols[static_cast<std::size_t>(c)]);
    sub.rowwise() -= sub.colwise().mean();
    Eigen::VectorXd norms = sub.colwise().norm();
    if (norms(0) == 0.0 || norms(1) == 0.0) return out;  // constant test column
    for (Eigen::Index c = 2; c < d; ++c) {
        if (norms(c) == 0.0) return out;  // constant conditioning column
    }
    sub.array().rowwise() /= norms.transpose().array();
    const Eigen::MatrixXd corr = sub.transpose() * sub;

    double r;
    if (ell == 0) {
        r = corr(0, 1);
    } else {
        const Eigen::MatrixXd r_ss = corr.bottomRightCorner(ell, ell);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(r_ss);
        if (lu.rank() < ell) return out;  // singular conditioning covariance
        const Eigen::VectorXd r_is = corr.row(0).tail(ell);
        const Eigen::VectorXd r_js = corr.row(1).tail(ell);
        const Eigen::VectorXd beta_i = lu.solve(r_is);
        const Eigen::VectorXd beta_j = lu.solve(r_js);
        const double c_ii = 1.0 - r_is.dot(beta_i);
        const double c_jj = 1.0 - r_js.dot(beta_j);
        if (c_ii <= 1e-12 || c_jj <= 1e-12) return out;  // test column inside span of S
        r = (corr(0, 1) - r_is.dot(beta_j)) / std::sqrt(c_ii * c_jj);
    }

    constexpr double clamp = 1.0 - 1e-12;
    r = std::clamp(r, -clamp, clamp);
    const double z = std::atanh(r);
    const double stat = std::sqrt(static_cast<double>(n - ell - 3)) * std::abs(z);

    out.degenerate = false;
    out.partial_corr = r;
    out.statistic = stat;
    out.p_value = std::erfc(stat / std::sqrt(2.0));  // 2 * (1 - Phi(stat))
    return out;
}

double crt_p_value(double observed, const std::vector<double>& resampled) {
    if (resampled.empty()) throw ConfigError("crt_p_value needs at least one resample");
    if (!std::isfinite(observed)) throw DataError("crt_p_value: observed statistic not finite");
    std::size_t count = 0;
    for (double t : resampled) {
        if (!std::isfinite(t)) throw DataError("crt_p_value: resampled statistic not finite");
        if (t >= observed) ++count;
    }
    return static_cast<double>(1 + count) / static_cast<double>(1 + resampled.size());
}

std::string to_string(Statistic s) {
    switch (s) {
        case Statistic::Rdc: return "rdc";
        case Statistic::AbsCorr: return "abs_corr";
        case Statistic::RdcShuffled: return "rdc_shuffled";
    }
    throw ConfigError("unknown statistic tag");
}

Statistic statistic_from_string(const std::string& s) {
    if (s == "rdc") return Statistic::Rdc;
    if (s == "abs_corr") return Statistic::AbsCorr;
    if (s == "rdc_shuffled") return Statistic::RdcShuffled;
    throw ConfigError("unknown statistic name: " + s);
}

std::string cit_outcome_to_json(const CITOutcome& outcome) {
    nlohmann::json rec;
    rec["p_value"] = outcome.p_value;
    rec["statistic_observed"] = outcome.statistic_observed;
    rec["statistic_resampled"] = outcome.statistic_resampled;
    rec["B"] = outcome.B;
    rec["elapsed_seconds"] = outcome.elapsed_seconds;
    return rec.dump();
}

CITOutcome fmcit(const DataMatrix& data, const VectorFieldModel& model, int i, int j,
                 const std::vector<int>& S, const FmcitOptions& opt) {
    opt.schedule.validate();
    FlowSampler sampler(model, opt.schedule);
    return fmcit_with_sampler(data, sampler, i, j, S, opt);
}

CITOutcome fmcit_with_sampler(const DataMatrix& data, const ConditionalSampler& sampler, int i,
                              int j, const std::vector<int>& S, const FmcitOptions& opt) {
    const auto start_time = std::chrono::steady_clock::now();
    check_cit_indices(data.cols(), i, j, S);
    if (opt.B < 1) throw ConfigError("fmcit needs B >= 1");
    if (opt.max_rows_per_chunk < 1) throw ConfigError("fmcit chunk size must be positive");
    if (sampler.dim() != data.cols()) {
        throw DimensionError("conditional sampler dimension does not match data");
    }

    Eigen::Index first_test_row = 0;
    if (opt.train_test_split) {
        const double ratio = *opt.train_test_split;
        if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("train/test ratio must be in (0,1)");
        first_test_row = split_train_rows(data.rows(), ratio);
    }
    const Eigen::Index m = data.rows() - first_test_row;
    if (m < 2) throw DataError("fmcit needs at least 2 test rows");

    const Eigen::VectorXd x_obs = data.values.col(i).segment(first_test_row, m);
    const Eigen::VectorXd y = data.values.col(j).segment(first_test_row, m);
    const auto ell = static_cast<Eigen::Index>(S.size());
    Eigen::MatrixXd cond(m, ell);
    for (Eigen::Index c = 0; c < ell; ++c) {
        cond.col(c) = data.values.col(S[static_cast<std::size_t>(c)]).segment(first_test_row, m);
    }

    RdcConfig rdc_cfg = opt.rdc;
    rdc_cfg.seed = seed_mix(opt.seed, 0x52444353ULL);
    std::vector<Eigen::Index> shuffle_perm;
    if (opt.statistic == Statistic::RdcShuffled) {
        shuffle_perm.resize(static_cast<std::size_t>(m));
        std::iota(shuffle_perm.begin(), shuffle_perm.end(), Eigen::Index{0});
        std::mt19937_64 rng(seed_mix(opt.seed, 0x53485546ULL));
        std::shuffle(shuffle_perm.begin(), shuffle_perm.end(), rng);
    }
    auto statistic = [&](const Eigen::VectorXd& xs) -> double {
        switch (opt.statistic) {
            case Statistic::Rdc: return rdc(xs, y, rdc_cfg);
            case Statistic::AbsCorr: return abs_corr(xs, y);
            case Statistic::RdcShuffled: {
                Eigen::VectorXd xp(m);
                for (Eigen::Index r = 0; r < m; ++r) xp[r] = xs[shuffle_perm[static_cast<std::size_t>(r)]];
                return rdc(xp, y, rdc_cfg);
            }
        }
        throw ConfigError("unknown statistic tag");
    };

    CITOutcome out;
    out.B = opt.B;
    out.statistic_observed = statistic(x_obs);

    // One batch of B*m conditioning rows (block b stacked at rows [b*m, (b+1)*m)),
    // imputed in chunks; the counter RNG keys on the global row, so chunking
    // does not change the draw.
    const Eigen::Index total = static_cast<Eigen::Index>(opt.B) * m;
    const std::uint64_t impute_seed = seed_mix(opt.seed, 0x494D5055ULL);
    Eigen::VectorXd xi_all(total);
    std::vector<int> cond_idx(S.begin(), S.end());
    for (Eigen::Index chunk_start = 0; chunk_start < total; chunk_start += opt.max_rows_per_chunk) {
        const Eigen::Index chunk = std::min(opt.max_rows_per_chunk, total - chunk_start);
        Eigen::MatrixXd cond_chunk(chunk, ell);
        for (Eigen::Index r = 0; r < chunk; ++r) {
            cond_chunk.row(r) = cond.row((chunk_start + r) % m);
        }
        const Eigen::MatrixXd imputed =
            sampler.impute(cond_chunk, cond_idx, impute_seed, chunk_start);
        xi_all.segment(chunk_start, chunk) = imputed.col(i);
    }

    out.statistic_resampled.reserve(static_cast<std::size_t>(opt.B));
    for (int b = 0; b < opt.B; ++b) {
        out.statistic_resampled.push_back(statistic(xi_all.segment(static_cast<Eigen::Index>(b) * m, m)));
    }
    out.p_value = crt_p_value(out.statistic_observed, out.statistic_resampled);
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return out;
}

}  // namespace fmcit
