#include "fmcit/data_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "fmcit/error.hpp"

namespace fmcit {

DataMatrix::DataMatrix(Eigen::MatrixXd v, std::vector<std::string> n)
    : values(std::move(v)), names(std::move(n)) {
    if (static_cast<Eigen::Index>(names.size()) != values.cols()) {
        throw DimensionError("DataMatrix: " + std::to_string(names.size()) + " names for " +
                             std::to_string(values.cols()) + " columns");
    }
}

DataMatrix::DataMatrix(Eigen::MatrixXd v) : values(std::move(v)) {
    names = default_column_names(static_cast<int>(values.cols()));
}

DataMatrix DataMatrix::head_rows(Eigen::Index count) const {
    return DataMatrix(values.topRows(count), names);
}

DataMatrix DataMatrix::tail_rows(Eigen::Index start) const {
    return DataMatrix(values.bottomRows(values.rows() - start), names);
}

Standardization compute_standardization(const DataMatrix& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    if (n < 2) throw DataError("standardization requires at least 2 rows");

    Standardization out;
    out.mean = data.values.colwise().mean();
    out.std.resize(p);
    for (Eigen::Index c = 0; c < p; ++c) {
        const double var = (data.values.col(c).array() - out.mean(c)).square().sum() / static_cast<double>(n);
        out.std(c) = std::sqrt(var);
        if (!(out.std(c) > 0.0)) {
            throw DataError("cannot standardize zero-variance column '" + data.name(static_cast<int>(c)) + "'");
        }
    }
    return out;
}

Eigen::Index split_train_rows(Eigen::Index n, double train_ratio) {
    auto k = static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * train_ratio));
    return std::clamp<Eigen::Index>(k, 1, n - 1);
}

std::vector<std::string> default_column_names(int p) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(p));
    for (int c = 0; c < p; ++c) names.push_back("x" + std::to_string(c));
    return names;
}

}  // namespace fmcit
