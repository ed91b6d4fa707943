#include "shrinkreg/distributions.hpp"

#include "shrinkreg/error.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace shrinkreg {
namespace {

template <class Term>
double poisson_mixture(double lambda, Term&& term, const SeriesOptions& opts) {
  if (lambda == 0.0) return term(0);

  const int mode = static_cast<int>(std::floor(lambda));
  const double mode_weight =
      std::exp(-lambda + mode * std::log(lambda) - std::lgamma(mode + 1.0));
  const double negligible = 1e-3 * opts.tail_tolerance;

  double sum = 0.0;
  double mass = 0.0;
  int used = 0;

  // Lower half, mode down to 0. Weights shrink faster than geometrically here.
  double w = mode_weight;
  for (int k = mode; k >= 0 && used < opts.max_terms; --k) {
    sum += w * term(k);
    mass += w;
    ++used;
    if (w < negligible) break;
    w *= static_cast<double>(k) / lambda;
  }

  w = mode_weight;
  for (int k = mode + 1; used < opts.max_terms; ++k) {
    w *= lambda / static_cast<double>(k);
    sum += w * term(k);
    mass += w;
    ++used;
    if (1.0 - mass < opts.tail_tolerance) break;
    if (w < negligible) break;
  }
  return sum;
}

/// Gamma(a - j) / Gamma(a) for integer j >= 1 and a - j > 0.
double falling_ratio(double a, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r /= (a - i);
  return r;
}

/// Upper incomplete gamma Gamma(s, z) for s <= 0 and z > 0, s integer or
/// half-integer, by stepping down from a positive (or zero) order with
/// Gamma(s, z) = (Gamma(s + 1, z) - z^s e^{-z}) / s.
double upper_gamma_nonpositive(double s, double z) {
  double order = s;
  int steps = 0;
  while (order < 0.0 && std::abs(order) > 1e-12) {
    order += 1.0;
    ++steps;
  }
  double value = 0.0;
  if (std::abs(order) <= 1e-12) {
    order = 0.0;
    value = boost::math::expint(1, z);
  } else {
    value = boost::math::tgamma(order, z);
  }
  for (int i = 0; i < steps; ++i) {
    const double next = order - 1.0;
    value = (value - std::pow(z, next) * std::exp(-z)) / next;
    order = next;
  }
  return value;
}

void check_moment_order(int j) {
  if (j < 1) throw Error(ErrorCode::InvalidConfig, "moment order must be >= 1");
}

}  // namespace

NoncentralChiSq NoncentralChiSq::make(int df, double noncentrality) {
  if (df < 1) throw Error(ErrorCode::InvalidConfig, "degrees of freedom must be >= 1");
  if (!(noncentrality >= 0.0) || std::isinf(noncentrality)) {
    throw Error(ErrorCode::InvalidConfig, "noncentrality must be finite and >= 0");
  }
  return NoncentralChiSq{df, noncentrality};
}

double central_cdf(int df, double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double cdf(const NoncentralChiSq& d, double x, const SeriesOptions& opts) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double half_x = 0.5 * x;
  return poisson_mixture(
      0.5 * d.noncentrality,
      [&](int k) { return boost::math::gamma_p(0.5 * d.df + k, half_x); }, opts);
}

double central_quantile(int df, double upper_alpha) {
  if (!(upper_alpha > 0.0 && upper_alpha < 1.0)) {
    throw Error(ErrorCode::InvalidLevel, "level must lie in (0, 1)");
  }
  if (df < 1) throw Error(ErrorCode::InvalidConfig, "degrees of freedom must be >= 1");

  const double a = 0.5 * df;
  auto excess = [&](double x) { return boost::math::gamma_q(a, 0.5 * x) - upper_alpha; };

  double hi = static_cast<double>(df);
  while (excess(hi) > 0.0) hi *= 2.0;
  double lo = 0.5 * hi;
  while (excess(lo) < 0.0) lo *= 0.5;
  if (excess(lo) == 0.0) return lo;
  if (excess(hi) == 0.0) return hi;

  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      excess, lo, hi, boost::math::tools::eps_tolerance<double>(40), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

double inverse_moment(const NoncentralChiSq& d, int j, const SeriesOptions& opts) {
  check_moment_order(j);
  if (d.df <= 2 * j) {
    throw Error(ErrorCode::DivergentMoment, "E[X^-" + std::to_string(j) + "] diverges for df=" +
                                                std::to_string(d.df));
  }
  const double scale = std::ldexp(1.0, -j);
  return poisson_mixture(
      0.5 * d.noncentrality,
      [&](int k) { return scale * falling_ratio(0.5 * d.df + k, j); }, opts);
}

double truncated_inverse_moment(const NoncentralChiSq& d, int j, double cutoff, bool below,
                                const SeriesOptions& opts) {
  check_moment_order(j);
  if (!(cutoff >= 0.0)) throw Error(ErrorCode::InvalidConfig, "cutoff must be >= 0");

  const bool divergent_core = d.df <= 2 * j;
  if (below) {
    if (cutoff == 0.0) return 0.0;
    if (divergent_core) {
      throw Error(ErrorCode::DivergentMoment, "truncated moment includes the divergent origin");
    }
    if (std::isinf(cutoff)) return inverse_moment(d, j, opts);
  } else {
    if (std::isinf(cutoff)) return 0.0;
    if (cutoff == 0.0) {
      if (divergent_core) {
        throw Error(ErrorCode::DivergentMoment, "upper moment over the full support diverges");
      }
      return inverse_moment(d, j, opts);
    }
  }

  const double scale = std::ldexp(1.0, -j);
  const double z = 0.5 * cutoff;
  return poisson_mixture(
      0.5 * d.noncentrality,
      [&](int k) {
        const double a = 0.5 * d.df + k;
        const double s = a - j;
        if (s > 0.0) {
          const double piece = below ? boost::math::gamma_p(s, z) : boost::math::gamma_q(s, z);
          return scale * falling_ratio(a, j) * piece;
        }
        // Only reachable for the upper piece: integral of x^{-j} over (cutoff, inf).
        return scale * upper_gamma_nonpositive(s, z) / boost::math::tgamma(a);
      },
      opts);
}

}  // namespace shrinkreg
