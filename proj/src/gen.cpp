#include "coreset/gen.hpp"

#include <cmath>

#include "coreset/metric.hpp"
#include "coreset/rng.hpp"

namespace coreset {

MixtureInstance gen_gaussian_mixture(std::size_t n, std::size_t d, int k, double separation,
                                     double sigma, std::uint64_t seed) {
  if (n < 1 || d < 1 || k < 1) fail(errc::invalid_argument, "n, d, k must be >= 1");
  Rng rng(seed);

  // Means by rejection inside a box sized so placement terminates quickly.
  double box = separation * std::max(2.0, 1.5 * std::pow(static_cast<double>(k), 1.0 / d));
  Matrix means(static_cast<std::size_t>(k), d);
  for (int c = 0; c < k; ++c) {
    for (int attempt = 0;; ++attempt) {
      for (std::size_t j = 0; j < d; ++j) means.at(c, j) = rng.uniform(0.0, box);
      bool ok = true;
      for (int prev = 0; prev < c && ok; ++prev)
        ok = squared_distance(means.row(c), means.row(prev), d) >= separation * separation;
      if (ok) break;
      if (attempt == 200) {
        box *= 1.5;
        attempt = 0;
      }
    }
  }

  Matrix coords(n, d);
  std::size_t row = 0;
  for (int c = 0; c < k; ++c) {
    const std::size_t count = n / k + (static_cast<std::size_t>(c) < n % k ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i, ++row)
      for (std::size_t j = 0; j < d; ++j)
        coords.at(row, j) = means.at(c, j) + sigma * rng.normal();
  }

  MixtureInstance out;
  out.points = PointSet(std::move(coords));
  out.planted = Solution(std::move(means));
  return out;
}

PointSet gen_uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) fail(errc::invalid_argument, "n, d must be >= 1");
  Rng rng(seed);
  Matrix coords(n, d);
  for (double& v : coords.data) v = rng.uniform();
  return PointSet(std::move(coords));
}

}  // namespace coreset
