#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fmcit {

/// n-by-p sample matrix with column names. Rows are observations.
struct DataMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names;

    DataMatrix() = default;
    DataMatrix(Eigen::MatrixXd v, std::vector<std::string> n);
    explicit DataMatrix(Eigen::MatrixXd v);

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    const std::string& name(int col) const { return names.at(static_cast<std::size_t>(col)); }

    /// First `count` rows as a new DataMatrix (shares names).
    DataMatrix head_rows(Eigen::Index count) const;
    /// Rows from `start` to the end.
    DataMatrix tail_rows(Eigen::Index start) const;
};

/// Column means and standard deviations (denominator n, matching a
/// population-style standardization of the training split).
struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
};

/// Throws DataError naming the column when a column has zero variance.
Standardization compute_standardization(const DataMatrix& data);

/// Number of rows assigned to the train part for a ratio split; the
/// remaining rows form the test part. Clamped so both parts are non-empty.
Eigen::Index split_train_rows(Eigen::Index n, double train_ratio);

std::vector<std::string> default_column_names(int p);

}  // namespace fmcit
