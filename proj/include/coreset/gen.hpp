#pragma once

#include <cstdint>

#include "coreset/matrix.hpp"

namespace coreset {

struct MixtureInstance {
  PointSet points;
  Solution planted;  // the component means
};

/// n points from k spherical Gaussians (stddev sigma per coordinate) whose
/// means are at pairwise distance >= separation.
MixtureInstance gen_gaussian_mixture(std::size_t n, std::size_t d, int k, double separation,
                                     double sigma, std::uint64_t seed);

/// Uniform points in [0, 1)^d; handy as an unstructured control instance.
PointSet gen_uniform_points(std::size_t n, std::size_t d, std::uint64_t seed);

}  // namespace coreset
