#include "coreset/projection.hpp"

#include <cmath>

#include "coreset/rng.hpp"

namespace coreset {

ProjectionMap make_projection(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (m < 1) fail(errc::invalid_argument, "projection target dimension must be >= 1");
  ProjectionMap map;
  map.source_dim = d;
  map.seed = seed;
  if (m >= d) {
    map.target_dim = d;
    map.identity = true;
    return map;
  }
  map.target_dim = m;
  map.matrix = Matrix(m, d);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (double& v : map.matrix.data) v = rng.normal() * scale;
  return map;
}

Matrix apply(const ProjectionMap& map, const Matrix& pts) {
  require_same_dim(pts.cols, map.source_dim, "projection input dimension mismatch");
  if (map.identity) return pts;
  Matrix out(pts.rows, map.target_dim);
  for (std::size_t i = 0; i < pts.rows; ++i) {
    const double* p = pts.row(i);
    double* q = out.row(i);
    for (std::size_t r = 0; r < map.target_dim; ++r) {
      const double* mrow = map.matrix.row(r);
      double acc = 0.0;
      for (std::size_t c = 0; c < map.source_dim; ++c) acc += mrow[c] * p[c];
      q[r] = acc;
    }
  }
  return out;
}

PointSet apply(const ProjectionMap& map, const PointSet& p) {
  return PointSet(apply(map, p.coords), p.multiplicity);
}

Solution apply(const ProjectionMap& map, const Solution& s) {
  return Solution(apply(map, s.centers));
}

std::size_t default_projection_dim(double eps, std::size_t distinct, std::size_t d) {
  const double m = std::ceil(8.0 / (eps * eps) * std::log(static_cast<double>(distinct)));
  if (!(m >= 1.0)) return 1;
  return std::min(d, static_cast<std::size_t>(m));
}

}  // namespace coreset
