#pragma once

#include <cstdint>

#include "coreset/matrix.hpp"

namespace coreset {

/// Random Gaussian linear map, entries i.i.d. N(0,1)/sqrt(m). When the target
/// dimension is >= the source dimension the map is the identity and
/// `identity` is set.
struct ProjectionMap {
  Matrix matrix;  // m x d; empty when identity
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::uint64_t seed = 0;
  bool identity = false;
};

ProjectionMap make_projection(std::size_t d, std::size_t m, std::uint64_t seed);

Matrix apply(const ProjectionMap& map, const Matrix& pts);
PointSet apply(const ProjectionMap& map, const PointSet& p);
Solution apply(const ProjectionMap& map, const Solution& s);

/// Default target dimension: ceil(8 * eps^-2 * ln(distinct)), capped at d.
std::size_t default_projection_dim(double eps, std::size_t distinct, std::size_t d);

}  // namespace coreset
