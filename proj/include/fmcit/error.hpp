#pragma once

#include <stdexcept>
#include <string>

namespace fmcit {

// Shape or index mismatch between tensors/columns.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite loss/gradient/update during optimization.
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data (zero-variance column, NaN, wrong sizes).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CI oracle failure, annotated with the (i, j, S) query that triggered it.
struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration / precondition violation.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace fmcit
