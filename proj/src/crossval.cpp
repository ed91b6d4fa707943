#include "shrinkreg/crossval.hpp"

#include "shrinkreg/error.hpp"
#include "shrinkreg/estimators.hpp"
#include "shrinkreg/parallel.hpp"
#include "shrinkreg/rng.hpp"

#include <string>

namespace shrinkreg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Stream tag separating fold permutations from any other use of the seed.
constexpr std::uint64_t kFoldStream = 0x666f6c64;

struct PreparedEstimator {
  EstimatorKind kind;
  const LinearRestriction* restriction;
  PretestRule rule;
};

std::vector<PreparedEstimator> prepare(const CvConfig& cfg) {
  std::vector<PreparedEstimator> out;
  out.reserve(cfg.estimators.size());
  for (const auto& spec : cfg.estimators) {
    PreparedEstimator e{spec.kind, nullptr, PretestRule{cfg.alpha, 0.0}};
    if (spec.kind != EstimatorKind::Unrestricted) e.restriction = &*spec.restriction;
    if (spec.kind == EstimatorKind::Pretest) e.rule = PretestRule::make(spec.restriction->p2(), cfg.alpha);
    out.push_back(e);
  }
  return out;
}

double mean_squared_error(const MatrixXd& X, const VectorXd& y, const VectorXd& beta) {
  return (y - X * beta).squaredNorm() / static_cast<double>(y.size());
}

/// Apparent (resubstitution) error of each estimator on the full data.
std::vector<double> apparent_errors(const RegressionData& data,
                                    const std::vector<PreparedEstimator>& est) {
  std::vector<double> out;
  out.reserve(est.size());
  for (const auto& e : est) {
    const FitResult fit = fit_estimator(e.kind, data.X, data.y, e.restriction, e.rule);
    out.push_back(mean_squared_error(data.X, data.y, fit.beta));
  }
  return out;
}

std::vector<CvPair> one_repetition(const RegressionData& data, const CvConfig& cfg,
                                   const std::vector<PreparedEstimator>& est,
                                   const std::vector<double>& apparent, std::uint64_t rep) {
  const auto n = static_cast<std::size_t>(data.rows());
  const std::vector<int> fold = fold_assignment(n, cfg.k, cfg.seed, rep);

  std::vector<CvPair> out(est.size());
  std::vector<double> full_error(est.size(), 0.0);
  std::vector<int> train, test;
  train.reserve(n);
  test.reserve(n);

  for (int f = 0; f < cfg.k; ++f) {
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(static_cast<int>(i));
    const MatrixXd Xtr = data.X(train, Eigen::all);
    const VectorXd ytr = data.y(train);
    const MatrixXd Xte = data.X(test, Eigen::all);
    const VectorXd yte = data.y(test);
    const double weight = static_cast<double>(test.size()) / static_cast<double>(n);

    for (std::size_t e = 0; e < est.size(); ++e) {
      const FitResult fit = fit_estimator(est[e].kind, Xtr, ytr, est[e].restriction, est[e].rule);
      out[e].raw += weight * mean_squared_error(Xte, yte, fit.beta);
      full_error[e] += weight * mean_squared_error(data.X, data.y, fit.beta);
    }
  }
  for (std::size_t e = 0; e < est.size(); ++e) {
    out[e].corrected = out[e].raw + apparent[e] - full_error[e];
  }
  return out;
}

CvReport run(const RegressionData& data, const CvConfig& cfg, int threads) {
  data.validate();
  cfg.validate(data.rows(), data.cols());
  const auto est = prepare(cfg);
  const auto apparent = apparent_errors(data, est);

  const auto reps = static_cast<std::size_t>(cfg.repetitions);
  std::vector<std::vector<CvPair>> per_rep(reps);
  auto body = [&](std::size_t r) { per_rep[r] = one_repetition(data, cfg, est, apparent, r); };
  if (threads == 1) {
    for (std::size_t r = 0; r < reps; ++r) body(r);
  } else {
    parallel_for(reps, threads, body);
  }

  CvReport report;
  report.repetitions = cfg.repetitions;
  report.k = cfg.k;
  report.seed = cfg.seed;
  report.alpha = cfg.alpha;
  std::vector<double> raw(reps), corrected(reps);
  for (std::size_t e = 0; e < est.size(); ++e) {
    for (std::size_t r = 0; r < reps; ++r) {
      raw[r] = per_rep[r][e].raw;
      corrected[r] = per_rep[r][e].corrected;
    }
    report.entries.push_back(
        CvEntry{cfg.estimators[e].display_label(), summarize(raw), summarize(corrected)});
  }
  return report;
}

}  // namespace

std::string EstimatorSpec::display_label() const {
  return label.empty() ? std::string(to_string(kind)) : label;
}

void CvConfig::validate(Eigen::Index n, Eigen::Index p) const {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::InvalidConfig,
                "fold count must lie in [2, n] (got " + std::to_string(k) + ")");
  }
  if (repetitions < 1) throw Error(ErrorCode::InvalidConfig, "need at least one repetition");
  if (estimators.empty()) throw Error(ErrorCode::InvalidConfig, "no estimators requested");
  // The largest fold has ceil(n/k) rows; its complement is the smallest training set.
  const Eigen::Index largest = (n + k - 1) / k;
  if (n - largest <= p) {
    throw Error(ErrorCode::FoldTooSmall, "training sets of " + std::to_string(n - largest) +
                                             " rows cannot fit " + std::to_string(p) +
                                             " coefficients");
  }
  for (const auto& spec : estimators) {
    if (spec.kind == EstimatorKind::Unrestricted) continue;
    if (!spec.restriction) {
      throw Error(ErrorCode::InvalidConfig, spec.display_label() + " needs a restriction");
    }
    if (spec.restriction->H.cols() != p) {
      throw Error(ErrorCode::DimensionMismatch,
                  spec.display_label() + ": restriction width does not match the design");
    }
    if (spec.kind == EstimatorKind::Pretest && !(alpha > 0.0 && alpha < 1.0)) {
      throw Error(ErrorCode::InvalidLevel, "pretest level must lie in (0, 1)");
    }
    if ((spec.kind == EstimatorKind::Stein || spec.kind == EstimatorKind::PositiveStein) &&
        spec.restriction->p2() < 3) {
      throw Error(ErrorCode::TooFewRestrictions,
                  spec.display_label() + ": Stein-type rules need p2 >= 3");
    }
  }
}

const CvEntry& CvReport::entry(const std::string& label) const {
  for (const auto& e : entries) {
    if (e.label == label) return e;
  }
  throw Error(ErrorCode::UnknownKind, "no estimator labelled " + label);
}

std::vector<int> fold_assignment(std::size_t n, int k, std::uint64_t seed, std::uint64_t rep) {
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::InvalidConfig, "fold count must lie in [2, n]");
  }
  Engine engine = make_engine(seed, {kFoldStream, rep});
  const auto perm = random_permutation(engine, n);
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);

  std::vector<int> fold(n);
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) fold[perm[pos++]] = f;
  }
  return fold;
}

std::vector<CvPair> kfold_once(const RegressionData& data, const CvConfig& cfg, std::uint64_t rep) {
  data.validate();
  cfg.validate(data.rows(), data.cols());
  const auto est = prepare(cfg);
  return one_repetition(data, cfg, est, apparent_errors(data, est), rep);
}

CvReport repeated_cv(const RegressionData& data, const CvConfig& cfg) {
  return run(data, cfg, resolve_threads(cfg.threads));
}

CvReport repeated_cv_serial(const RegressionData& data, const CvConfig& cfg) {
  return run(data, cfg, 1);
}

}  // namespace shrinkreg
