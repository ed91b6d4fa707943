#include "shrinkreg/estimators.hpp"

#include "shrinkreg/distributions.hpp"
#include "shrinkreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shrinkreg {
namespace {

void require_stein_family(const ShrinkageContext& ctx) {
  if (ctx.p2 < 3) {
    throw Error(ErrorCode::TooFewRestrictions,
                "Stein-type rules need p2 >= 3 (got " + std::to_string(ctx.p2) + ")");
  }
}

/// restricted + weight * (unrestricted - restricted)
FitResult blend(const ShrinkageContext& ctx, double weight, EstimatorKind kind) {
  FitResult out;
  out.beta = ctx.restricted.beta + weight * (ctx.unrestricted.beta - ctx.restricted.beta);
  out.s2 = ctx.unrestricted.s2;
  out.psi = ctx.psi;
  out.kind = kind;
  return out;
}

}  // namespace

ShrinkageContext ShrinkageContext::make(FitResult unrestricted, FitResult restricted, double psi,
                                        Eigen::Index p2) {
  if (unrestricted.beta.size() != restricted.beta.size()) {
    throw Error(ErrorCode::DimensionMismatch, "unrestricted and restricted fits differ in length");
  }
  if (!(psi >= 0.0)) throw Error(ErrorCode::InvalidConfig, "test statistic must be >= 0");
  if (p2 < 1) throw Error(ErrorCode::InvalidConfig, "need p2 >= 1");
  ShrinkageContext ctx;
  ctx.unrestricted = std::move(unrestricted);
  ctx.restricted = std::move(restricted);
  ctx.psi = psi;
  ctx.p2 = p2;
  ctx.kappa = static_cast<double>(p2) - 2.0;
  return ctx;
}

ShrinkageContext ShrinkageContext::from_pair(const RestrictedPair& pair) {
  return make(pair.unrestricted, pair.restricted, pair.psi, pair.p2);
}

PretestRule PretestRule::make(Eigen::Index p2, double alpha) {
  return PretestRule{alpha, central_quantile(static_cast<int>(p2), alpha)};
}

FitResult stein_estimate(const ShrinkageContext& ctx) {
  require_stein_family(ctx);
  if (ctx.psi == 0.0) {
    // The shrink factor is unbounded below; fall back to the S+ limit.
    FitResult out = blend(ctx, 0.0, EstimatorKind::Stein);
    out.degenerate = true;
    return out;
  }
  return blend(ctx, 1.0 - ctx.kappa / ctx.psi, EstimatorKind::Stein);
}

FitResult positive_stein_estimate(const ShrinkageContext& ctx) {
  require_stein_family(ctx);
  const double weight = ctx.psi == 0.0 ? 0.0 : std::max(0.0, 1.0 - ctx.kappa / ctx.psi);
  return blend(ctx, weight, EstimatorKind::PositiveStein);
}

FitResult pretest_estimate(const ShrinkageContext& ctx, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "pretest level must lie in (0, 1)");
  }
  return pretest_estimate(ctx, PretestRule::make(ctx.p2, alpha));
}

FitResult pretest_estimate(const ShrinkageContext& ctx, const PretestRule& rule) {
  // Ties go to the unrestricted fit: the restricted one is kept only when
  // psi < critical.
  FitResult out = ctx.psi < rule.critical ? ctx.restricted : ctx.unrestricted;
  out.s2 = ctx.unrestricted.s2;
  out.psi = ctx.psi;
  out.kind = EstimatorKind::Pretest;
  out.alpha = rule.alpha;
  return out;
}

FitResult estimate(EstimatorKind kind, const ShrinkageContext& ctx, const PretestRule& rule) {
  switch (kind) {
    case EstimatorKind::Unrestricted: return ctx.unrestricted;
    case EstimatorKind::Restricted: return ctx.restricted;
    case EstimatorKind::Stein: return stein_estimate(ctx);
    case EstimatorKind::PositiveStein: return positive_stein_estimate(ctx);
    case EstimatorKind::Pretest: return pretest_estimate(ctx, rule);
  }
  throw Error(ErrorCode::UnknownKind, "unknown estimator kind");
}

FitResult fit_estimator(EstimatorKind kind, const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const LinearRestriction* restriction, const PretestRule& rule) {
  if (kind == EstimatorKind::Unrestricted) {
    const LeastSquares ls(X, y);
    FitResult out;
    out.beta = ls.beta();
    out.s2 = ls.perfect_fit() ? 0.0 : ls.s2();
    return out;
  }
  if (restriction == nullptr) {
    throw Error(ErrorCode::InvalidConfig,
                std::string(to_string(kind)) + " estimator needs a restriction");
  }
  return estimate(kind, ShrinkageContext::from_pair(fit_pair(X, y, *restriction)), rule);
}

}  // namespace shrinkreg
