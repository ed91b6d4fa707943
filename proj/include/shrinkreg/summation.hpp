#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace shrinkreg {

/// Pairwise summation in a fixed tree order. The result depends only on the
/// values and their order, never on how they were produced.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean, sd / sqrt(count)
  double sd = 0.0;  // spread across the summarized values
};

inline Summary summarize(std::span<const double> values) {
  Summary out;
  if (values.empty()) return out;
  const double count = static_cast<double>(values.size());
  out.mean = pairwise_sum(values) / count;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (const double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / (count - 1.0));
  out.se = out.sd / std::sqrt(count);
  return out;
}

}  // namespace shrinkreg
