#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shrinkreg {

enum class EstimatorKind { Unrestricted, Restricted, Stein, PositiveStein, Pretest };

/// Short tags used in reports: UR, R, S, S+, PT.
std::string_view to_string(EstimatorKind kind);
/// Accepts the short tags plus "PS" as an alias for S+.
EstimatorKind parse_kind(std::string_view tag);

/// Response vector and design matrix. Column 0 is the intercept when
/// `has_intercept` is set; it is never standardized or restricted.
struct RegressionData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;
  bool standardized = false;
  bool has_intercept = false;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }

  /// Checks shapes, n > p and the standardization flag. Rank is checked by
  /// the fitting routines since they factor X anyway.
  void validate() const;
};

/// Encodes H beta = h with H of full row rank p2.
struct LinearRestriction {
  Eigen::MatrixXd H;
  Eigen::VectorXd h;

  Eigen::Index p2() const { return H.rows(); }

  static LinearRestriction make(Eigen::MatrixXd H, Eigen::VectorXd h);
  /// H = [0 | I_p2], h = 0: the trailing p2 coefficients are zero.
  static LinearRestriction nuisance_subset(Eigen::Index p, Eigen::Index p2);
};

struct FitResult {
  Eigen::VectorXd beta;
  double s2 = 0.0;
  double psi = 0.0;
  EstimatorKind kind = EstimatorKind::Unrestricted;
  std::optional<double> alpha;
  // Set when the Stein rule met psi == 0 and fell back to the restricted fit.
  bool degenerate = false;
};

/// Least squares via column-pivoted QR of X. Products with C^{-1} = (X'X)^{-1}
/// go through triangular solves against R; C is never inverted.
class LeastSquares {
 public:
  static constexpr double kConditionBound = 1e12;

  LeastSquares(const Eigen::Ref<const Eigen::MatrixXd>& X,
               const Eigen::Ref<const Eigen::VectorXd>& y);

  const Eigen::VectorXd& beta() const { return beta_; }
  double rss() const { return rss_; }
  /// RSS / (n - p).
  double s2() const { return rss_ / static_cast<double>(n_ - p_); }
  /// True when the residuals vanish to working precision.
  bool perfect_fit() const { return perfect_fit_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index p() const { return p_; }

  /// C^{-1} B for a p x m right-hand side.
  Eigen::MatrixXd gram_solve(const Eigen::MatrixXd& B) const;
  /// R^{-T} P' B, so that B' C^{-1} B = (R^{-T} P' B)' (R^{-T} P' B).
  Eigen::MatrixXd half_solve(const Eigen::MatrixXd& B) const;

 private:
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::VectorXd beta_;
  double rss_ = 0.0;
  bool perfect_fit_ = false;
  Eigen::Index n_ = 0;
  Eigen::Index p_ = 0;
};

/// Unrestricted fit, restricted fit and the Wald statistic computed from one
/// factorization of X.
struct RestrictedPair {
  FitResult unrestricted;
  FitResult restricted;
  double psi = 0.0;
  Eigen::Index p2 = 0;
};

RestrictedPair fit_pair(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const LinearRestriction& r);
RestrictedPair fit_pair(const RegressionData& data, const LinearRestriction& r);

FitResult ols_fit(const RegressionData& data);
FitResult restricted_fit(const RegressionData& data, const LinearRestriction& r);
/// Throws ZeroVariance when s2 = 0 and the restriction is violated; returns 0
/// when both vanish.
double wald_statistic(const RegressionData& data, const LinearRestriction& r);

double residual_sum_of_squares(const RegressionData& data, const Eigen::VectorXd& beta);

}  // namespace shrinkreg
