#pragma once

#include "shrinkreg/regression.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shrinkreg {

/// Raw CSV contents. Quoted fields may contain commas, doubled quotes and
/// line breaks; surrounding quotes are removed.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws MissingColumn.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
/// Throws FileNotFound or EmptyFile.
CsvTable read_csv(const std::filesystem::path& path);

/// Picks the response and covariates out of a parsed table, with an optional
/// leading column of ones. Errors name the offending row (1-based, header
/// excluded) and column.
RegressionData to_regression_data(const CsvTable& table, std::string_view response,
                                   const std::vector<std::string>& covariates,
                                   bool intercept = true);

RegressionData load_csv(const std::filesystem::path& path, std::string_view response,
                        const std::vector<std::string>& covariates, bool intercept = true);

/// Centers and scales every non-intercept column by its sample standard
/// deviation (divisor n - 1). The response is left alone.
RegressionData standardize(const RegressionData& data);

struct BundledDataset {
  std::string name;
  std::string file;
  std::string sha256;
  std::string response;
  std::vector<std::string> covariates;  // default full model
};

const std::vector<BundledDataset>& bundled_datasets();
const BundledDataset* find_bundled(std::string_view name);

/// $SHRINKREG_DATA_DIR if set, otherwise the directory baked in at build time.
std::filesystem::path data_dir();

std::string sha256_hex(std::string_view bytes);

/// Reads a bundled dataset and verifies its checksum (ChecksumMismatch).
CsvTable load_bundled(std::string_view name);

/// A bundled name or a CSV path, plus the models to compare. Empty response
/// or full list fall back to the bundled defaults (or, for a path, to every
/// other column). An empty sub-model means no restriction.
struct AnalysisSpec {
  std::string data;
  std::string response;
  std::vector<std::string> full;
  std::vector<std::string> sub;
  bool standardize = true;
  bool intercept = true;
};

/// Design ordered as intercept, sub-model covariates, then the remaining
/// (nuisance) covariates, so the restriction is always the trailing block.
struct Analysis {
  RegressionData data;
  std::string response;
  std::optional<LinearRestriction> restriction;
  std::vector<std::string> sub_columns;
  std::vector<std::string> nuisance_columns;
};

Analysis build_analysis(const AnalysisSpec& spec);

std::vector<std::string> split_list(std::string_view text, char sep = ',');

}  // namespace shrinkreg
