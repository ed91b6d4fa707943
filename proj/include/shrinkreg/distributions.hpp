#pragma once

namespace shrinkreg {

/// Truncation control for the Poisson-mixture series. Terms are summed
/// outward from the Poisson mode until the unvisited Poisson mass drops below
/// `tail_tolerance`.
struct SeriesOptions {
  double tail_tolerance = 1e-14;
  int max_terms = 10000;
};

/// Chi-square with `df` degrees of freedom and noncentrality `noncentrality`
/// (mean df + noncentrality).
struct NoncentralChiSq {
  int df = 1;
  double noncentrality = 0.0;

  static NoncentralChiSq make(int df, double noncentrality);
};

double central_cdf(int df, double x);

/// P[X <= x]; x < 0 gives 0.
double cdf(const NoncentralChiSq& d, double x, const SeriesOptions& opts = {});

/// x with P[X > x] = upper_alpha for a central chi-square.
double central_quantile(int df, double upper_alpha);

/// E[X^{-j}]; requires df > 2j.
double inverse_moment(const NoncentralChiSq& d, int j, const SeriesOptions& opts = {});

/// E[X^{-j} 1{X <= cutoff}] when `below`, E[X^{-j} 1{X > cutoff}] otherwise.
/// The upper piece stays finite for df <= 2j as long as cutoff > 0.
double truncated_inverse_moment(const NoncentralChiSq& d, int j, double cutoff, bool below,
                                const SeriesOptions& opts = {});

}  // namespace shrinkreg
