#include "shrinkreg/regression.hpp"

#include "shrinkreg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shrinkreg {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Unrestricted: return "UR";
    case EstimatorKind::Restricted: return "R";
    case EstimatorKind::Stein: return "S";
    case EstimatorKind::PositiveStein: return "S+";
    case EstimatorKind::Pretest: return "PT";
  }
  return "?";
}

EstimatorKind parse_kind(std::string_view tag) {
  if (tag == "UR") return EstimatorKind::Unrestricted;
  if (tag == "R") return EstimatorKind::Restricted;
  if (tag == "S") return EstimatorKind::Stein;
  if (tag == "S+" || tag == "PS") return EstimatorKind::PositiveStein;
  if (tag == "PT") return EstimatorKind::Pretest;
  throw Error(ErrorCode::UnknownKind, "unknown estimator kind '" + std::string(tag) + "'");
}

void RegressionData::validate() const {
  if (y.size() != X.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "response has " + std::to_string(y.size()) + " rows but design has " +
                    std::to_string(X.rows()));
  }
  if (!column_names.empty() && static_cast<Eigen::Index>(column_names.size()) != X.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "column_names does not match design width");
  }
  if (X.rows() <= X.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "need more rows than columns (n=" + std::to_string(X.rows()) +
                    ", p=" + std::to_string(X.cols()) + ")");
  }
  if (has_intercept && (X.cols() == 0 || (X.col(0).array() != 1.0).any())) {
    throw Error(ErrorCode::InvalidConfig, "intercept column is not all ones");
  }
  if (standardized) {
    const double n = static_cast<double>(X.rows());
    for (Eigen::Index j = has_intercept ? 1 : 0; j < X.cols(); ++j) {
      const double mean = X.col(j).mean();
      const double sd = std::sqrt((X.col(j).array() - mean).square().sum() / (n - 1.0));
      if (std::abs(mean) > 1e-10 || std::abs(sd - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidConfig,
                    "column " + std::to_string(j) + " is flagged standardized but is not");
      }
    }
  }
}

LinearRestriction LinearRestriction::make(Eigen::MatrixXd H, Eigen::VectorXd h) {
  if (H.rows() != h.size()) {
    throw Error(ErrorCode::DimensionMismatch, "H and h disagree on the number of restrictions");
  }
  if (H.rows() < 1 || H.rows() > H.cols()) {
    throw Error(ErrorCode::InvalidConfig, "need 1 <= p2 <= p restrictions");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(H.transpose());
  qr.setThreshold(1.0 / LeastSquares::kConditionBound);
  if (qr.rank() < H.rows()) {
    throw Error(ErrorCode::SingularRestriction, "restriction matrix H is not of full row rank");
  }
  return LinearRestriction{std::move(H), std::move(h)};
}

LinearRestriction LinearRestriction::nuisance_subset(Eigen::Index p, Eigen::Index p2) {
  if (p2 < 1 || p2 > p) {
    throw Error(ErrorCode::InvalidConfig, "need 1 <= p2 <= p restrictions");
  }
  LinearRestriction r;
  r.H = Eigen::MatrixXd::Zero(p2, p);
  r.H.rightCols(p2).setIdentity();
  r.h = Eigen::VectorXd::Zero(p2);
  return r;
}

LeastSquares::LeastSquares(const Eigen::Ref<const Eigen::MatrixXd>& X,
                           const Eigen::Ref<const Eigen::VectorXd>& y)
    : qr_(X), n_(X.rows()), p_(X.cols()) {
  if (y.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "response length does not match design rows");
  }
  if (n_ <= p_) {
    throw Error(ErrorCode::DimensionMismatch, "need more rows than columns");
  }
  const auto& R = qr_.matrixQR();
  const double lead = std::abs(R(0, 0));
  const double last = std::abs(R(p_ - 1, p_ - 1));
  if (lead == 0.0 || last < lead / kConditionBound) {
    throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient");
  }
  beta_ = qr_.solve(y);
  rss_ = (y - X * beta_).squaredNorm();
  const double scale = 1e-13 * std::max(1.0, y.norm());
  perfect_fit_ = rss_ <= scale * scale;
}

Eigen::MatrixXd LeastSquares::half_solve(const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd permuted = qr_.colsPermutation().transpose() * B;
  qr_.matrixQR()
      .topLeftCorner(p_, p_)
      .triangularView<Eigen::Upper>()
      .transpose()
      .solveInPlace(permuted);
  return permuted;
}

Eigen::MatrixXd LeastSquares::gram_solve(const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd z = half_solve(B);
  qr_.matrixQR().topLeftCorner(p_, p_).triangularView<Eigen::Upper>().solveInPlace(z);
  return qr_.colsPermutation() * z;
}

RestrictedPair fit_pair(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const LinearRestriction& r) {
  if (r.H.cols() != X.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "restriction width does not match design");
  }
  const LeastSquares ls(X, y);
  const Eigen::MatrixXd Ht = r.H.transpose();

  // B = H C^{-1} H' = A'A with A = R^{-T} P' H'.
  const Eigen::MatrixXd A = ls.half_solve(Ht);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues();
  const double smin = sv.minCoeff();
  if (smin == 0.0 || (sv.maxCoeff() / smin) * (sv.maxCoeff() / smin) > LeastSquares::kConditionBound) {
    throw Error(ErrorCode::SingularRestriction, "H C^{-1} H' is numerically singular");
  }
  const Eigen::MatrixXd B = A.transpose() * A;

  const Eigen::VectorXd d = r.H * ls.beta() - r.h;
  const Eigen::VectorXd Bd = B.ldlt().solve(d);
  const Eigen::VectorXd correction = ls.gram_solve(Ht) * Bd;
  const double numerator = std::max(0.0, d.dot(Bd));

  double psi = 0.0;
  if (ls.perfect_fit()) {
    const double hscale = r.h.size() ? r.h.lpNorm<Eigen::Infinity>() : 0.0;
    const bool satisfied = d.lpNorm<Eigen::Infinity>() <= 1e-8 * (1.0 + hscale);
    psi = satisfied ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    psi = numerator / ls.s2();
  }

  RestrictedPair out;
  out.p2 = r.p2();
  out.psi = psi;
  out.unrestricted.beta = ls.beta();
  out.unrestricted.s2 = ls.perfect_fit() ? 0.0 : ls.s2();
  out.unrestricted.psi = psi;
  out.unrestricted.kind = EstimatorKind::Unrestricted;
  out.restricted.beta = ls.beta() - correction;
  out.restricted.s2 = out.unrestricted.s2;
  out.restricted.psi = psi;
  out.restricted.kind = EstimatorKind::Restricted;
  return out;
}

RestrictedPair fit_pair(const RegressionData& data, const LinearRestriction& r) {
  data.validate();
  return fit_pair(data.X, data.y, r);
}

FitResult ols_fit(const RegressionData& data) {
  data.validate();
  const LeastSquares ls(data.X, data.y);
  FitResult out;
  out.beta = ls.beta();
  out.s2 = ls.perfect_fit() ? 0.0 : ls.s2();
  out.kind = EstimatorKind::Unrestricted;
  return out;
}

FitResult restricted_fit(const RegressionData& data, const LinearRestriction& r) {
  return fit_pair(data, r).restricted;
}

double wald_statistic(const RegressionData& data, const LinearRestriction& r) {
  const double psi = fit_pair(data, r).psi;
  if (std::isinf(psi)) {
    throw Error(ErrorCode::ZeroVariance,
                "residual variance is zero while the restriction is violated");
  }
  return psi;
}

double residual_sum_of_squares(const RegressionData& data, const Eigen::VectorXd& beta) {
  return (data.y - data.X * beta).squaredNorm();
}

}  // namespace shrinkreg
