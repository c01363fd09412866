#pragma once

#include <string>

#include "fmcit/data_matrix.hpp"

namespace fmcit {

/// Rectangular numeric CSV with a header row. NaN/inf/ragged rows rejected
/// with line and column diagnostics.
DataMatrix load_csv(const std::string& path);

/// Header + rows at 17 significant digits (doubles round-trip exactly).
void save_csv(const DataMatrix& data, const std::string& path);

/// Shortest exact decimal form used across result emitters.
std::string format_double(double v);

}  // namespace fmcit
