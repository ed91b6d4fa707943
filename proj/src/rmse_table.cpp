#include "shrinkreg/rmse_table.hpp"

#include "shrinkreg/error.hpp"

#include <algorithm>
#include <string>

namespace shrinkreg {

double RmseTable::value(std::size_t row, EstimatorKind kind) const {
  const auto it = std::find(kinds.begin(), kinds.end(), kind);
  if (it == kinds.end()) {
    throw Error(ErrorCode::UnknownKind,
                "table has no column for " + std::string(to_string(kind)));
  }
  return rows.at(row).rmse.at(static_cast<std::size_t>(it - kinds.begin()));
}

}  // namespace shrinkreg
