#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace coreset {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion (default 95%).
inline WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                                      double zscore = 1.959963984540054) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = zscore * zscore;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double spread = zscore * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, (center - spread) / denom), std::min(1.0, (center + spread) / denom)};
}

/// Nearest-rank quantile of an unsorted sample (copies and sorts).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const std::size_t idx =
      std::min(values.size() - 1, static_cast<std::size_t>(std::max(1.0, rank)) - 1);
  return values[idx];
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

}  // namespace coreset
