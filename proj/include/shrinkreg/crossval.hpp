#pragma once

#include "shrinkreg/regression.hpp"
#include "shrinkreg/summation.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shrinkreg {

/// One estimator to assess. The restriction is required for every kind but UR.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Unrestricted;
  std::optional<LinearRestriction> restriction;
  std::string label;  // defaults to the kind tag

  std::string display_label() const;
};

struct CvConfig {
  int k = 10;
  int repetitions = 1;
  double alpha = 0.05;  // pretest level
  std::uint64_t seed = 0;
  std::vector<EstimatorSpec> estimators;
  int threads = 0;  // 0: SHRINKREG_THREADS / OpenMP default

  void validate(Eigen::Index n, Eigen::Index p) const;
};

struct CvPair {
  double raw = 0.0;
  double corrected = 0.0;
};

struct CvEntry {
  std::string label;
  Summary raw;
  Summary corrected;
};

struct CvReport {
  std::vector<CvEntry> entries;
  int repetitions = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;

  const CvEntry& entry(const std::string& label) const;
};

/// Fold index of every row for repetition `rep`: a seeded permutation cut into
/// k contiguous blocks, the first n mod k of them one element longer.
std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed, std::uint64_t rep);

/// Raw and bias-corrected K-fold prediction error of each configured
/// estimator for one repetition.
std::vector<CvPair> kfold_once(const RegressionData& data, const CvConfig& cfg, std::uint64_t rep);

/// Repetitions spread over OpenMP workers; the result does not depend on the
/// worker count.
CvReport repeated_cv(const RegressionData& data, const CvConfig& cfg);
/// Single-threaded reference for repeated_cv.
CvReport repeated_cv_serial(const RegressionData& data, const CvConfig& cfg);

}  // namespace shrinkreg
