#include "shrinkreg/io.hpp"

#include "shrinkreg/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef SHRINKREG_DATA_DIR
#define SHRINKREG_DATA_DIR "data"
#endif

namespace shrinkreg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::MissingColumn, "no column named " + std::string(name));
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::string_view text) {
  // A byte-order mark would otherwise stick to the first column name.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::string(quoted ? std::string_view(field) : trim(field)));
    field.clear();
    quoted = false;
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted && field_started) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          field_started = false;  // closing quote; stay in quoted mode until the separator
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !quoted && trim(field).empty()) {
      field.clear();
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      // dropped; \r\n endings are handled by the \n branch
    } else if (!quoted) {
      field.push_back(c);
    }
  }
  if (!field.empty() || !record.empty() || quoted) end_record();

  CsvTable table;
  if (records.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
  table.header = std::move(records[0]);
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
  }
  const std::string text = read_file(path);
  if (trim(text).empty()) throw Error(ErrorCode::EmptyFile, path.string() + " is empty");
  return parse_csv(text);
}

RegressionData to_regression_data(const CsvTable& table, std::string_view response,
                                  const std::vector<std::string>& covariates, bool intercept) {
  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, "table has a header but no rows");
  if (contains(covariates, std::string(response))) {
    throw Error(ErrorCode::InvalidConfig, "response " + std::string(response) + " is also a covariate");
  }

  const std::size_t y_col = table.column(response);
  std::vector<std::size_t> x_cols;
  for (const auto& name : covariates) x_cols.push_back(table.column(name));

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index offset = intercept ? 1 : 0;
  RegressionData data;
  data.y.resize(n);
  data.X.resize(n, static_cast<Eigen::Index>(x_cols.size()) + offset);
  data.has_intercept = intercept;
  if (intercept) data.column_names.push_back("(Intercept)");
  data.column_names.insert(data.column_names.end(), covariates.begin(), covariates.end());

  auto cell = [&](Eigen::Index row, std::size_t col) {
    const auto& record = table.rows[static_cast<std::size_t>(row)];
    const std::string& name = table.header[col];
    if (col >= record.size()) {
      throw Error(ErrorCode::NonNumericCell,
                  "row " + std::to_string(row + 1) + ", column " + name + ": missing value");
    }
    const auto value = parse_number(record[col]);
    if (!value) {
      throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(row + 1) + ", column " +
                                                 name + ": '" + record[col] + "' is not a number");
    }
    return *value;
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    data.y(i) = cell(i, y_col);
    if (intercept) data.X(i, 0) = 1.0;
    for (std::size_t j = 0; j < x_cols.size(); ++j) {
      data.X(i, static_cast<Eigen::Index>(j) + offset) = cell(i, x_cols[j]);
    }
  }
  return data;
}

RegressionData load_csv(const std::filesystem::path& path, std::string_view response,
                        const std::vector<std::string>& covariates, bool intercept) {
  return to_regression_data(read_csv(path), response, covariates, intercept);
}

RegressionData standardize(const RegressionData& data) {
  RegressionData out = data;
  const Eigen::Index n = data.rows();
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "standardizing needs at least two rows");
  for (Eigen::Index j = data.has_intercept ? 1 : 0; j < data.cols(); ++j) {
    auto col = out.X.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      const std::string name =
          static_cast<std::size_t>(j) < data.column_names.size() ? data.column_names[j]
                                                                 : "#" + std::to_string(j);
      throw Error(ErrorCode::ZeroVariance, "column " + name + " is constant");
    }
    col /= sd;
  }
  out.standardized = true;
  return out;
}

const std::vector<BundledDataset>& bundled_datasets() {
  static const std::vector<BundledDataset> sets{
      {"prostate", "prostate.csv",
       "8d93e64c7200d63d37d2f9bceca675d40dbd34517c0ab19643ee71ce1d4cadfc", "lpsa",
       {"lcavol", "lweight", "svi", "lbph", "age", "lcp", "gleason", "pgg45"}},
      {"galapagos", "galapagos.csv",
       "7cc9baaa38386233b74b7d5bdbd14437dd071cb11cf6dc261c78a5d1b2b70415", "Species",
       {"Endemics", "Area", "Elevation", "Nearest", "Scruz", "Adjacent"}},
      {"state", "state.csv", "dc8b68a94e46f0fb5e51ce2ce5e03f9f9ea13ce96d60f0c9504369860c5065e6",
       "LifeExp", {"Population", "Murder", "HSGrad", "Frost", "Income", "Illiteracy", "Area"}},
  };
  return sets;
}

const BundledDataset* find_bundled(std::string_view name) {
  for (const auto& d : bundled_datasets()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SHRINKREG_DATA_DIR"); env && *env) return env;
  return SHRINKREG_DATA_DIR;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InvalidConfig, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

CsvTable load_bundled(std::string_view name) {
  const BundledDataset* set = find_bundled(name);
  if (set == nullptr) throw Error(ErrorCode::FileNotFound, "no bundled dataset " + std::string(name));
  const auto path = data_dir() / set->file;
  const std::string text = read_file(path);
  const std::string digest = sha256_hex(text);
  if (digest != set->sha256) {
    throw Error(ErrorCode::ChecksumMismatch,
                path.string() + ": expected sha256 " + set->sha256 + ", got " + digest);
  }
  return parse_csv(text);
}

Analysis build_analysis(const AnalysisSpec& spec) {
  const BundledDataset* set = find_bundled(spec.data);
  const CsvTable table = set ? load_bundled(spec.data) : read_csv(spec.data);

  std::string response = spec.response;
  if (response.empty()) {
    if (!set) throw Error(ErrorCode::InvalidConfig, "--response is required for a CSV path");
    response = set->response;
  }

  std::vector<std::string> full = spec.full;
  if (full.empty()) {
    if (set) {
      full = set->covariates;
    } else {
      for (const auto& name : table.header) {
        if (name != response) full.push_back(name);
      }
    }
  }
  if (contains(full, response)) {
    throw Error(ErrorCode::InvalidConfig, "response " + response + " listed as a covariate");
  }
  for (const auto& name : spec.sub) {
    if (!contains(full, name)) {
      throw Error(ErrorCode::InvalidConfig, "sub-model column " + name + " is not in the full model");
    }
  }

  Analysis out;
  out.response = response;
  out.sub_columns = spec.sub;
  for (const auto& name : full) {
    if (!contains(spec.sub, name)) out.nuisance_columns.push_back(name);
  }
  std::vector<std::string> ordered = out.sub_columns;
  ordered.insert(ordered.end(), out.nuisance_columns.begin(), out.nuisance_columns.end());

  out.data = to_regression_data(table, response, ordered, spec.intercept);
  if (spec.standardize) out.data = standardize(out.data);
  out.data.validate();

  if (!spec.sub.empty() && !out.nuisance_columns.empty()) {
    out.restriction = LinearRestriction::nuisance_subset(
        out.data.cols(), static_cast<Eigen::Index>(out.nuisance_columns.size()));
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

}  // namespace shrinkreg
