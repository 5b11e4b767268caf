#pragma once

#include <cstdint>
#include <span>

#include "coreset/matrix.hpp"

namespace coreset {

/// A reference solution together with its induced clusters and per-cluster
/// statistics: sizes are total multiplicities, delta[i] is the average cost
/// of cluster i (0 for empty clusters).
struct Clustering {
  Solution solution;
  std::vector<int> assignment;   // per point, center index
  CostVector point_cost;         // per point, multiplicity-free cost under the solution
  std::vector<std::int64_t> cluster_size;
  std::vector<double> cluster_cost;
  std::vector<double> delta;

  std::size_t k() const { return solution.k(); }
};

/// D^z seeding: first center uniform by mass, each next drawn with
/// probability proportional to multiplicity * current point cost.
Solution dz_seed(const PointSet& p, int k, int z, std::uint64_t seed);

/// Real-weighted variant, used when seeding on a coreset.
Solution dz_seed_weighted(const Matrix& pts, std::span<const double> weights, int k, int z,
                          std::uint64_t seed);

/// Single-swap local search with candidate centers drawn from the input
/// points (cost-weighted, k candidates per sweep). Applies the best improving
/// swap per sweep; stops after max_swaps consecutive non-improving sweeps.
/// Never increases the cost; max_swaps = 0 returns the input verbatim.
Solution local_search_refine(const PointSet& p, const Solution& s, int z, int max_swaps,
                             std::uint64_t seed = 0x10c5ULL);
Solution local_search_refine_weighted(const Matrix& pts, std::span<const double> mass,
                                      const Solution& s, int z, int max_swaps,
                                      std::uint64_t seed = 0x10c5ULL);

Clustering build_clustering(const PointSet& p, const Solution& s, int z);

/// Real-mass variant; cluster_size is the rounded mass (informational).
Clustering build_clustering_weighted(const Matrix& pts, std::span<const double> mass,
                                     const Solution& s, int z);

}  // namespace coreset
