#pragma once

#include "shrinkreg/regression.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace shrinkreg {

struct RmseRow {
  double delta = 0.0;
  std::vector<double> rmse;  // one entry per RmseTable::kinds, MSE(UR) / MSE(kind)
};

/// Relative efficiencies over a grid, either simulated or from the asymptotic
/// risk formulas. `delta_label` says which distance the grid measures.
struct RmseTable {
  std::string delta_label = "delta";
  std::vector<EstimatorKind> kinds;
  std::vector<RmseRow> rows;
  std::size_t replications = 0;  // 0 for theoretical tables
  std::uint64_t seed = 0;

  /// Throws UnknownKind if `kind` is not a column.
  double value(std::size_t row, EstimatorKind kind) const;
};

}  // namespace shrinkreg
