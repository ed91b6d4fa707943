#pragma once

#include "shrinkreg/regression.hpp"

#include <Eigen/Dense>

namespace shrinkreg {

/// Inputs shared by the Stein, positive-part Stein and pretest rules.
struct ShrinkageContext {
  FitResult unrestricted;
  FitResult restricted;
  double psi = 0.0;
  Eigen::Index p2 = 0;
  double kappa = 0.0;  // p2 - 2

  static ShrinkageContext make(FitResult unrestricted, FitResult restricted, double psi,
                               Eigen::Index p2);
  static ShrinkageContext from_pair(const RestrictedPair& pair);
};

/// Upper-alpha chi-square(p2) critical value, computed once and reused.
struct PretestRule {
  double alpha = 0.05;
  double critical = 0.0;

  static PretestRule make(Eigen::Index p2, double alpha);
};

FitResult stein_estimate(const ShrinkageContext& ctx);
FitResult positive_stein_estimate(const ShrinkageContext& ctx);
FitResult pretest_estimate(const ShrinkageContext& ctx, double alpha);
FitResult pretest_estimate(const ShrinkageContext& ctx, const PretestRule& rule);

/// Dispatch on kind. `rule` is only consulted for the pretest estimator.
FitResult estimate(EstimatorKind kind, const ShrinkageContext& ctx, const PretestRule& rule);

/// Fits `kind` on (X, y). The restriction is ignored for the unrestricted fit
/// and may then be null.
FitResult fit_estimator(EstimatorKind kind, const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const LinearRestriction* restriction, const PretestRule& rule);

}  // namespace shrinkreg
