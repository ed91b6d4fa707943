#include "shrinkreg/simulation.hpp"

#include "shrinkreg/error.hpp"
#include "shrinkreg/estimators.hpp"
#include "shrinkreg/parallel.hpp"
#include "shrinkreg/summation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace shrinkreg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::uint64_t kSimStream = 0x73696d;
constexpr double kBernoulliRate = 0.45;

bool needs_stein(const std::vector<EstimatorKind>& kinds) {
  return std::any_of(kinds.begin(), kinds.end(), [](EstimatorKind k) {
    return k == EstimatorKind::Stein || k == EstimatorKind::PositiveStein;
  });
}

double bernoulli(Engine& engine, double rate) {
  // 53 random bits mapped to [0, 1).
  return static_cast<double>(engine() >> 11) * 0x1.0p-53 < rate ? 1.0 : 0.0;
}

/// Squared losses of UR followed by each configured kind for one replication
/// at one grid point, plus the number of designs that had to be redrawn.
struct Replication {
  std::vector<double> loss;
  int redraws = 0;
};

Replication replicate(const SimConfig& cfg, const LinearRestriction& restriction,
                      const PretestRule& rule, const VectorXd& beta, std::size_t grid_index,
                      std::size_t rep, int max_redraws) {
  const int p = cfg.p1 + cfg.p2;
  const Eigen::Index scope = cfg.loss == LossScope::Full ? p : cfg.p1;

  for (int attempt = 0;; ++attempt) {
    Engine engine = make_engine(cfg.seed, {kSimStream, grid_index, rep,
                                           static_cast<std::uint64_t>(attempt)});
    RegressionData data = generate_design(cfg.n, p, engine);
    std::normal_distribution<double> noise;
    data.y = data.X * beta;
    for (Eigen::Index i = 0; i < data.y.size(); ++i) data.y(i) += noise(engine);

    try {
      const auto ctx = ShrinkageContext::from_pair(fit_pair(data.X, data.y, restriction));
      Replication out;
      out.redraws = attempt;
      out.loss.reserve(cfg.kinds.size() + 1);
      auto loss = [&](const VectorXd& b) { return (b - beta).head(scope).squaredNorm(); };
      out.loss.push_back(loss(ctx.unrestricted.beta));
      for (const EstimatorKind kind : cfg.kinds) out.loss.push_back(loss(estimate(kind, ctx, rule).beta));
      return out;
    } catch (const Error& e) {
      const bool degenerate = e.code() == ErrorCode::RankDeficient ||
                              e.code() == ErrorCode::SingularRestriction ||
                              e.code() == ErrorCode::ZeroVariance;
      if (!degenerate) throw;
      if (attempt >= max_redraws) {
        throw Error(ErrorCode::TooManyRejections,
                    "replication " + std::to_string(rep) + " kept drawing degenerate designs");
      }
    }
  }
}

RmseTable sweep(const SimConfig& raw_cfg, int threads) {
  const SimConfig cfg = raw_cfg.resolved();
  const int p = cfg.p1 + cfg.p2;
  const auto restriction = LinearRestriction::nuisance_subset(p, cfg.p2);
  const PretestRule rule = PretestRule::make(cfg.p2, cfg.alpha);
  const std::size_t reps = cfg.replications;
  const auto allowed = static_cast<int>(std::floor(cfg.max_rejection_rate * static_cast<double>(reps)));

  RmseTable table;
  table.delta_label = "delta";
  table.kinds = cfg.kinds;
  table.replications = reps;
  table.seed = cfg.seed;

  const std::size_t columns = cfg.kinds.size() + 1;
  std::vector<Replication> results(reps);
  std::vector<double> column(reps);

  for (std::size_t g = 0; g < cfg.delta_grid.size(); ++g) {
    const VectorXd beta = beta_for_delta(cfg, cfg.delta_grid[g]);
    auto body = [&](std::size_t r) {
      results[r] = replicate(cfg, restriction, rule, beta, g, r, allowed);
    };
    if (threads == 1) {
      for (std::size_t r = 0; r < reps; ++r) body(r);
    } else {
      parallel_for(reps, threads, body);
    }

    int redraws = 0;
    for (const auto& res : results) redraws += res.redraws;
    if (redraws > allowed) {
      throw Error(ErrorCode::TooManyRejections,
                  std::to_string(redraws) + " degenerate designs redrawn at delta=" +
                      std::to_string(cfg.delta_grid[g]));
    }

    std::vector<double> mse(columns);
    for (std::size_t c = 0; c < columns; ++c) {
      for (std::size_t r = 0; r < reps; ++r) column[r] = results[r].loss[c];
      mse[c] = pairwise_sum(column) / static_cast<double>(reps);
    }
    RmseRow row;
    row.delta = cfg.delta_grid[g];
    for (std::size_t c = 1; c < columns; ++c) row.rmse.push_back(mse[0] / mse[c]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

SimConfig SimConfig::resolved() const {
  SimConfig cfg = *this;
  if (cfg.p1 < 1 || cfg.p2 < 1) throw Error(ErrorCode::InvalidConfig, "need p1 >= 1 and p2 >= 1");
  if (cfg.p1 + cfg.p2 < 3) throw Error(ErrorCode::InvalidConfig, "the design needs p >= 3");
  if (cfg.n <= cfg.p1 + cfg.p2) {
    throw Error(ErrorCode::DimensionMismatch, "need n > p1 + p2");
  }
  if (cfg.replications < 1) throw Error(ErrorCode::InvalidConfig, "need at least one replication");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "pretest level must lie in (0, 1)");
  }
  if (needs_stein(cfg.kinds) && cfg.p2 < 3) {
    throw Error(ErrorCode::TooFewRestrictions, "Stein-type rules need p2 >= 3");
  }
  if (!(cfg.max_rejection_rate >= 0.0 && cfg.max_rejection_rate < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "rejection rate cap must lie in [0, 1)");
  }
  if (cfg.beta1.size() == 0) cfg.beta1 = VectorXd::Ones(cfg.p1);
  if (cfg.beta1.size() != cfg.p1) {
    throw Error(ErrorCode::DimensionMismatch, "beta1 must have p1 entries");
  }
  if (cfg.delta_grid.empty()) cfg.delta_grid = default_delta_grid();
  for (std::size_t i = 0; i < cfg.delta_grid.size(); ++i) {
    const double d = cfg.delta_grid[i];
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw Error(ErrorCode::InvalidConfig, "delta values must be finite and >= 0");
    }
    if (i > 0 && !(d > cfg.delta_grid[i - 1])) {
      throw Error(ErrorCode::InvalidConfig, "delta grid must be strictly increasing");
    }
  }
  return cfg;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[i] = static_cast<double>(i) / 19.0;
  return grid;
}

RegressionData generate_design(int n, int p, Engine& engine) {
  if (p < 3) throw Error(ErrorCode::InvalidConfig, "the design needs p >= 3");
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "need n >= 1");
  std::normal_distribution<double> normal;

  RegressionData data;
  data.X.resize(n, p);
  for (int i = 0; i < n; ++i) {
    const double shared = normal(engine);
    for (int s = 0; s < p; ++s) {
      const double z = normal(engine);
      data.X(i, s) = z * z + shared;
    }
    data.X(i, 0) += bernoulli(engine, kBernoulliRate);
    data.X(i, 1) += 2.0 * bernoulli(engine, kBernoulliRate);
  }
  data.column_names.reserve(p);
  for (int s = 0; s < p; ++s) data.column_names.push_back("x" + std::to_string(s + 1));
  return data;
}

VectorXd beta_for_delta(const SimConfig& cfg, double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidConfig, "delta must be >= 0");
  VectorXd beta = VectorXd::Zero(cfg.p1 + cfg.p2);
  beta.head(cfg.p1) = cfg.beta1.size() == 0 ? VectorXd::Ones(cfg.p1) : cfg.beta1;
  beta(cfg.p1) = delta;
  return beta;
}

RmseTable rmse_sweep(const SimConfig& cfg) { return sweep(cfg, resolve_threads(cfg.threads)); }

RmseTable rmse_sweep_serial(const SimConfig& cfg) { return sweep(cfg, 1); }

}  // namespace shrinkreg
