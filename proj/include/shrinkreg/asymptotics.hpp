#pragma once

#include "shrinkreg/distributions.hpp"
#include "shrinkreg/regression.hpp"
#include "shrinkreg/rmse_table.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace shrinkreg {

/// Drift omega of H beta away from h, scaled by sqrt(n), together with the
/// limiting design C, error variance and loss weight W. Everything the risk
/// formulas need is precomputed by make().
class LocalAlternative {
 public:
  static LocalAlternative make(Eigen::VectorXd omega, double sigma2, Eigen::MatrixXd C,
                               Eigen::MatrixXd H, Eigen::MatrixXd W);

  /// Same design and weights, different drift.
  LocalAlternative with_omega(Eigen::VectorXd omega) const;

  const Eigen::VectorXd& omega() const { return omega_; }
  double sigma2() const { return sigma2_; }
  const Eigen::MatrixXd& C() const { return C_; }
  const Eigen::MatrixXd& H() const { return H_; }
  const Eigen::MatrixXd& W() const { return W_; }
  Eigen::Index p() const { return C_.rows(); }
  Eigen::Index p2() const { return H_.rows(); }

  /// B = H C^{-1} H'.
  const Eigen::MatrixXd& B() const { return B_; }
  /// Q = H C^{-1} W C^{-1} H' B^{-1}.
  const Eigen::MatrixXd& Q() const { return Q_; }
  /// C^{-1} H' B^{-1}, the map from drift to restricted-fit bias.
  const Eigen::MatrixXd& G() const { return G_; }

  /// omega' B^{-1} omega / sigma2.
  double noncentrality() const { return noncentrality_; }
  /// sigma2 tr(W C^{-1}).
  double trace_wc() const { return trace_wc_; }
  /// sigma2 tr(Q).
  double trace_q() const { return trace_q_; }
  /// omega' B^{-1} Q omega, the W-weighted squared bias of the restricted fit.
  double bias_quadratic() const { return bias_quadratic_; }
  /// omega' B^{-1} omega.
  double drift_quadratic() const { return drift_quadratic_; }

 private:
  void refresh_drift();

  Eigen::VectorXd omega_;
  double sigma2_ = 1.0;
  Eigen::MatrixXd C_, H_, W_;
  Eigen::MatrixXd B_, Binv_, Q_, G_;
  double noncentrality_ = 0.0;
  double trace_wc_ = 0.0;
  double trace_q_ = 0.0;
  double bias_quadratic_ = 0.0;
  double drift_quadratic_ = 0.0;
};

/// Which set of risk expressions adqr evaluates.
///  Derived:   the expressions obtained from the limiting normal law of the
///             unrestricted fit (default; these satisfy the dominance chain).
///  AsPrinted: the commonly published lines with their symbols read as
///             Q11 -> Q, g'Q11 g -> omega' B^{-1} Q omega, p+2+2 -> p2+2, and
///             the pretest quadratic term weighted by omega' B^{-1} omega.
enum class RiskFormula { Derived, AsPrinted };

/// Asymptotic bias vector. UR, R, PT and S+ only.
Eigen::VectorXd adb(EstimatorKind kind, const LocalAlternative& alt,
                    std::optional<double> alpha = std::nullopt, const SeriesOptions& opts = {});

/// ADB' (sigma2 C^{-1})^{-1} ADB restricted to the H-directions, which equals
/// noncentrality() times the squared scalar bias factor.
double aqdb(EstimatorKind kind, const LocalAlternative& alt,
            std::optional<double> alpha = std::nullopt, const SeriesOptions& opts = {});

/// Asymptotic quadratic risk under weight W.
double adqr(EstimatorKind kind, const LocalAlternative& alt,
            std::optional<double> alpha = std::nullopt,
            RiskFormula formula = RiskFormula::Derived, const SeriesOptions& opts = {});

/// Risk under an arbitrary shrink rule beta_UR - h(psi) (beta_UR - beta_R),
/// given the three mixture expectations E[h]_{p2+2}, E[h^2 - 2h]_{p2+2} and
/// E[h^2 - 2h]_{p2+4} (subscripts are chi-square degrees of freedom).
double shrink_rule_risk(const LocalAlternative& alt, double mean_h_2, double mean_g_2,
                        double mean_g_4);

/// Theoretical RMSE = adqr(UR) / adqr(kind) along a ray in omega space. The
/// direction is the template's omega (or the first coordinate if it is zero),
/// rescaled so that each row hits the requested noncentrality.
RmseTable risk_curve(const LocalAlternative& alt_template, const std::vector<EstimatorKind>& kinds,
                     const std::vector<double>& delta_grid, double alpha,
                     RiskFormula formula = RiskFormula::Derived, int threads = 0);

}  // namespace shrinkreg
