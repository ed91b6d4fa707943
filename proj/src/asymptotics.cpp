#include "shrinkreg/asymptotics.hpp"

#include "shrinkreg/error.hpp"
#include "shrinkreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shrinkreg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::LLT<MatrixXd> positive_definite(const MatrixXd& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " must be square");
  }
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * (1.0 + M.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(name) + " is not symmetric");
  }
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(name) + " is not positive definite");
  }
  return llt;
}

/// The three chi-square laws the formulas draw on, all sharing noncentrality.
struct Laws {
  NoncentralChiSq plus2, plus4;
  SeriesOptions opts;

  Laws(const LocalAlternative& alt, const SeriesOptions& o)
      : plus2{static_cast<int>(alt.p2()) + 2, alt.noncentrality()},
        plus4{static_cast<int>(alt.p2()) + 4, alt.noncentrality()},
        opts(o) {}

  double H2(double x) const { return cdf(plus2, x, opts); }
  double H4(double x) const { return cdf(plus4, x, opts); }
};

double pretest_critical(const LocalAlternative& alt, std::optional<double> alpha) {
  if (!alpha) throw Error(ErrorCode::MissingAlpha, "the pretest estimator needs a level");
  return central_quantile(static_cast<int>(alt.p2()), *alpha);
}

void require_stein_family(const LocalAlternative& alt) {
  if (alt.p2() < 3) {
    throw Error(ErrorCode::TooFewRestrictions,
                "Stein-type risks need p2 >= 3 (got " + std::to_string(alt.p2()) + ")");
  }
}

/// E[min(1, k/X)] for X ~ d, k = p2 - 2 > 0.
double positive_part_mean(const NoncentralChiSq& d, double kappa, const SeriesOptions& opts) {
  return cdf(d, kappa, opts) + kappa * truncated_inverse_moment(d, 1, kappa, false, opts);
}

/// E[min(1, k/X)^2].
double positive_part_square(const NoncentralChiSq& d, double kappa, const SeriesOptions& opts) {
  return cdf(d, kappa, opts) + kappa * kappa * truncated_inverse_moment(d, 2, kappa, false, opts);
}

/// Multiplier of -G omega in the bias of each rule.
double bias_factor(EstimatorKind kind, const LocalAlternative& alt, std::optional<double> alpha,
                   const SeriesOptions& opts) {
  const Laws laws(alt, opts);
  switch (kind) {
    case EstimatorKind::Unrestricted: return 0.0;
    case EstimatorKind::Restricted: return 1.0;
    case EstimatorKind::Pretest: return laws.H2(pretest_critical(alt, alpha));
    case EstimatorKind::PositiveStein: {
      require_stein_family(alt);
      return positive_part_mean(laws.plus2, static_cast<double>(alt.p2()) - 2.0, opts);
    }
    case EstimatorKind::Stein: break;
  }
  throw Error(ErrorCode::UnknownKind,
              "bias is defined for UR, R, PT and S+ only (got " + std::string(to_string(kind)) + ")");
}

double derived_risk(EstimatorKind kind, const LocalAlternative& alt, std::optional<double> alpha,
                    const SeriesOptions& opts) {
  const Laws laws(alt, opts);
  const double t = alt.trace_wc();
  const double q = alt.trace_q();
  const double w = alt.bias_quadratic();
  const double kappa = static_cast<double>(alt.p2()) - 2.0;

  switch (kind) {
    case EstimatorKind::Unrestricted: return t;
    case EstimatorKind::Restricted: return t - q + w;
    case EstimatorKind::Pretest: {
      const double c = pretest_critical(alt, alpha);
      const double h2 = laws.H2(c);
      return t - q * h2 + w * (2.0 * h2 - laws.H4(c));
    }
    case EstimatorKind::Stein: {
      require_stein_family(alt);
      const double e2_1 = inverse_moment(laws.plus2, 1, opts);
      const double e2_2 = inverse_moment(laws.plus2, 2, opts);
      const double e4_2 = inverse_moment(laws.plus4, 2, opts);
      return t - kappa * q * (2.0 * e2_1 - kappa * e2_2) + kappa * (kappa + 4.0) * w * e4_2;
    }
    case EstimatorKind::PositiveStein: {
      require_stein_family(alt);
      const double m2 = positive_part_mean(laws.plus2, kappa, opts);
      const double s2 = positive_part_square(laws.plus2, kappa, opts);
      const double m4 = positive_part_mean(laws.plus4, kappa, opts);
      const double s4 = positive_part_square(laws.plus4, kappa, opts);
      return shrink_rule_risk(alt, m2, s2 - 2.0 * m2, s4 - 2.0 * m4);
    }
  }
  throw Error(ErrorCode::UnknownKind, "unknown estimator kind");
}

double printed_risk(EstimatorKind kind, const LocalAlternative& alt, std::optional<double> alpha,
                    const SeriesOptions& opts) {
  const Laws laws(alt, opts);
  const double t = alt.trace_wc();
  const double q = alt.trace_q();
  const double w = alt.bias_quadratic();
  const double kappa = static_cast<double>(alt.p2()) - 2.0;
  const double p2 = static_cast<double>(alt.p2());

  auto stein = [&] {
    const double e4_2 = inverse_moment(laws.plus4, 2, opts);
    return t - kappa * q * (2.0 * e4_2 - kappa * e4_2) + kappa * (p2 + 6.0) * w * e4_2;
  };

  switch (kind) {
    case EstimatorKind::Unrestricted:
    case EstimatorKind::Restricted: return derived_risk(kind, alt, alpha, opts);
    case EstimatorKind::Pretest: {
      const double c = pretest_critical(alt, alpha);
      const double h2 = laws.H2(c);
      return t - q * h2 + alt.drift_quadratic() * (2.0 * h2 - laws.H4(c));
    }
    case EstimatorKind::Stein: require_stein_family(alt); return stein();
    case EstimatorKind::PositiveStein: {
      require_stein_family(alt);
      auto below = [&](const NoncentralChiSq& d, int j) {
        return truncated_inverse_moment(d, j, kappa, true, opts);
      };
      const double l2_1 = below(laws.plus2, 1);
      const double l2_2 = below(laws.plus2, 2);
      const double l4_1 = below(laws.plus4, 1);
      const double l4_2 = below(laws.plus4, 2);
      return stein() + kappa * q * (l2_1 - kappa * l2_2) - q * laws.H2(kappa) +
             w * 2.0 * laws.H4(kappa) -
             kappa * w * (2.0 * l2_1 - 2.0 * l4_1 + kappa * l4_2);
    }
  }
  throw Error(ErrorCode::UnknownKind, "unknown estimator kind");
}

}  // namespace

LocalAlternative LocalAlternative::make(VectorXd omega, double sigma2, MatrixXd C, MatrixXd H,
                                        MatrixXd W) {
  const Eigen::Index p = C.rows();
  if (H.cols() != p || W.rows() != p || W.cols() != p || omega.size() != H.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "local alternative: inconsistent dimensions");
  }
  if (H.rows() < 1 || H.rows() > p) {
    throw Error(ErrorCode::DimensionMismatch, "need 1 <= p2 <= p restrictions");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::InvalidConfig, "sigma2 must be positive and finite");
  }

  const auto c_llt = positive_definite(C, "C");
  positive_definite(W, "W");

  LocalAlternative alt;
  alt.omega_ = std::move(omega);
  alt.sigma2_ = sigma2;
  alt.C_ = std::move(C);
  alt.H_ = std::move(H);
  alt.W_ = std::move(W);

  const MatrixXd cinv_ht = c_llt.solve(alt.H_.transpose());
  alt.B_ = alt.H_ * cinv_ht;
  alt.B_ = 0.5 * (alt.B_ + alt.B_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(alt.B_, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > LeastSquares::kConditionBound) {
    throw Error(ErrorCode::SingularRestriction, "H C^{-1} H' is numerically singular");
  }
  const Eigen::LLT<MatrixXd> b_llt(alt.B_);
  alt.Binv_ = b_llt.solve(MatrixXd::Identity(alt.B_.rows(), alt.B_.cols()));
  alt.G_ = cinv_ht * alt.Binv_;
  alt.Q_ = cinv_ht.transpose() * alt.W_ * alt.G_;

  alt.trace_wc_ = sigma2 * c_llt.solve(alt.W_).trace();
  alt.trace_q_ = sigma2 * alt.Q_.trace();
  alt.refresh_drift();
  return alt;
}

LocalAlternative LocalAlternative::with_omega(VectorXd omega) const {
  if (omega.size() != H_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "drift length must equal p2");
  }
  LocalAlternative alt = *this;
  alt.omega_ = std::move(omega);
  alt.refresh_drift();
  return alt;
}

void LocalAlternative::refresh_drift() {
  drift_quadratic_ = omega_.dot(Binv_ * omega_);
  noncentrality_ = std::max(0.0, drift_quadratic_ / sigma2_);
  const VectorXd bias = G_ * omega_;
  bias_quadratic_ = bias.dot(W_ * bias);
}

VectorXd adb(EstimatorKind kind, const LocalAlternative& alt, std::optional<double> alpha,
             const SeriesOptions& opts) {
  const double factor = bias_factor(kind, alt, alpha, opts);
  if (factor == 0.0) return VectorXd::Zero(alt.p());
  return -factor * (alt.G() * alt.omega());
}

double aqdb(EstimatorKind kind, const LocalAlternative& alt, std::optional<double> alpha,
            const SeriesOptions& opts) {
  const double factor = bias_factor(kind, alt, alpha, opts);
  return alt.noncentrality() * factor * factor;
}

double adqr(EstimatorKind kind, const LocalAlternative& alt, std::optional<double> alpha,
            RiskFormula formula, const SeriesOptions& opts) {
  return formula == RiskFormula::Derived ? derived_risk(kind, alt, alpha, opts)
                                         : printed_risk(kind, alt, alpha, opts);
}

double shrink_rule_risk(const LocalAlternative& alt, double mean_h_2, double mean_g_2,
                        double mean_g_4) {
  return alt.trace_wc() + alt.trace_q() * mean_g_2 +
         alt.bias_quadratic() * (mean_g_4 + 2.0 * mean_h_2);
}

RmseTable risk_curve(const LocalAlternative& alt_template, const std::vector<EstimatorKind>& kinds,
                     const std::vector<double>& delta_grid, double alpha, RiskFormula formula,
                     int threads) {
  for (const double d : delta_grid) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw Error(ErrorCode::InvalidConfig, "noncentrality grid values must be finite and >= 0");
    }
  }

  VectorXd direction = alt_template.omega();
  if (direction.norm() == 0.0) direction = VectorXd::Unit(alt_template.p2(), 0);
  direction.normalize();
  const double unit_quadratic = alt_template.with_omega(direction).drift_quadratic();

  RmseTable table;
  table.delta_label = "noncentrality";
  table.kinds = kinds;
  table.rows.resize(delta_grid.size());

  parallel_for(delta_grid.size(), resolve_threads(threads), [&](std::size_t i) {
    const double scale = std::sqrt(delta_grid[i] * alt_template.sigma2() / unit_quadratic);
    const LocalAlternative alt = alt_template.with_omega(scale * direction);
    const double reference = adqr(EstimatorKind::Unrestricted, alt, alpha, formula);
    RmseRow row;
    row.delta = delta_grid[i];
    row.rmse.reserve(kinds.size());
    for (const EstimatorKind kind : kinds) {
      row.rmse.push_back(reference / adqr(kind, alt, alpha, formula));
    }
    table.rows[i] = std::move(row);
  });
  return table;
}

}  // namespace shrinkreg
