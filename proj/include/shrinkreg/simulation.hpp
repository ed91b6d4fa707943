#pragma once

#include "shrinkreg/regression.hpp"
#include "shrinkreg/rmse_table.hpp"
#include "shrinkreg/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace shrinkreg {

/// Which coefficients enter the squared-error loss.
enum class LossScope {
  Full,  // the whole coefficient vector
  Main,  // only the first p1 (retained) coefficients
};

struct SimConfig {
  int n = 50;
  int p1 = 4;
  int p2 = 6;
  Eigen::VectorXd beta1;  // empty: all ones
  std::vector<double> delta_grid;  // empty: default_delta_grid()
  std::size_t replications = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  LossScope loss = LossScope::Full;
  std::vector<EstimatorKind> kinds{EstimatorKind::Restricted, EstimatorKind::PositiveStein,
                                   EstimatorKind::Pretest};
  int threads = 0;
  // Degenerate designs are redrawn; more than this share of redraws is an error.
  double max_rejection_rate = 0.01;

  /// Fills the defaults and checks the configuration.
  SimConfig resolved() const;
};

/// 20 equally spaced values from 0 to 1.
std::vector<double> default_delta_grid();

/// n x p design: x1 = z1^2 + z + b1, x2 = z2^2 + z + 2 b2, xs = zs^2 + z for
/// s >= 3, with z, z1..zp standard normal (z shared by the row) and b1, b2
/// Bernoulli(0.45). y is left empty.
RegressionData generate_design(int n, int p, Engine& engine);

/// (beta1, delta, 0, ..., 0): the whole distance from the restricted pivot
/// sits on the first nuisance coordinate.
Eigen::VectorXd beta_for_delta(const SimConfig& cfg, double delta);

/// Monte Carlo MSE(UR) / MSE(kind) at each grid point; replications run on
/// OpenMP workers and the table does not depend on the worker count.
RmseTable rmse_sweep(const SimConfig& cfg);
/// Single-threaded reference for rmse_sweep.
RmseTable rmse_sweep_serial(const SimConfig& cfg);

}  // namespace shrinkreg
