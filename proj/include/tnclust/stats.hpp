#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tnclust/errors.hpp"

namespace tnclust {

/// Empirical quantile with linear interpolation between order statistics
/// (position q*(N-1) in the sorted sample).
inline double linear_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ParamError("linear_quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw ParamError("linear_quantile: q must be in [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace tnclust
