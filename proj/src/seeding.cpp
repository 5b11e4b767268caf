#include "coreset/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coreset/metric.hpp"
#include "coreset/rng.hpp"

namespace coreset {

namespace {

Solution dz_seed_impl(const Matrix& pts, std::span<const double> weights, int k, int z,
                      std::uint64_t seed) {
  if (k < 1) fail(errc::invalid_argument, "k must be >= 1");
  if (static_cast<std::size_t>(k) > distinct_point_count(pts))
    fail(errc::k_exceeds_distinct, "cannot seed more centers than distinct points");

  Rng rng(seed);
  const std::size_t n = pts.rows, d = pts.cols;
  Matrix centers(0, d);
  centers.data.reserve(static_cast<std::size_t>(k) * d);

  // First center uniform by mass.
  DiscreteSampler by_mass(weights);
  centers.append_row(pts.row(by_mass.draw(rng)));

  CostVector cur(n);
  std::vector<double> draw_weight(n);
  for (int c = 1; c < k; ++c) {
    const double* latest = centers.row(centers.rows - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double cost = cost_from_sq(squared_distance(pts.row(i), latest, d), z);
      if (centers.rows == 1 || cost < cur[i]) cur[i] = cost;
      draw_weight[i] = weights[i] * cur[i];
    }
    DiscreteSampler by_cost(draw_weight);
    if (!(by_cost.total() > 0.0))
      fail(errc::k_exceeds_distinct, "all remaining points coincide with chosen centers");
    centers.append_row(pts.row(by_cost.draw(rng)));
  }
  return Solution(std::move(centers));
}

std::vector<double> as_mass(const PointSet& p) {
  std::vector<double> w(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) w[i] = static_cast<double>(p.multiplicity[i]);
  return w;
}

}  // namespace

Solution dz_seed(const PointSet& p, int k, int z, std::uint64_t seed) {
  p.validate();
  return dz_seed_impl(p.coords, as_mass(p), k, z, seed);
}

Solution dz_seed_weighted(const Matrix& pts, std::span<const double> weights, int k, int z,
                          std::uint64_t seed) {
  return dz_seed_impl(pts, weights, k, z, seed);
}

Solution local_search_refine_weighted(const Matrix& pts, std::span<const double> mass,
                                      const Solution& s, int z, int max_swaps,
                                      std::uint64_t seed) {
  require_same_dim(pts.cols, s.dim(), "points and solution dimensions differ");
  if (max_swaps <= 0) return s;

  constexpr double kMinRelImprovement = 1e-6;
  const std::size_t n = pts.rows, d = pts.cols;
  const std::size_t k = s.k();
  Solution best = s;
  Rng rng(seed);

  // Per-point nearest / second-nearest costs under the current solution.
  std::vector<int> idx1(n);
  CostVector c1(n), c2(n);

  auto recompute = [&](double& cost_out) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double b1 = std::numeric_limits<double>::infinity(), b2 = b1;
      int j1 = 0;
      for (std::size_t j = 0; j < k; ++j) {
        const double sq = squared_distance(pts.row(i), best.centers.row(j), d);
        if (sq < b1) {
          b2 = b1;
          b1 = sq;
          j1 = static_cast<int>(j);
        } else if (sq < b2) {
          b2 = sq;
        }
      }
      idx1[i] = j1;
      c1[i] = cost_from_sq(b1, z);
      c2[i] = k > 1 ? cost_from_sq(b2, z) : c1[i];
      acc += mass[i] * c1[i];
    }
    cost_out = acc;
  };

  double cur_cost;
  recompute(cur_cost);

  std::vector<double> draw_weight(n), adjust(k);
  int idle_sweeps = 0;
  while (idle_sweeps < max_swaps) {
    // Candidates for this sweep, drawn proportional to mass * current cost.
    for (std::size_t i = 0; i < n; ++i) draw_weight[i] = mass[i] * c1[i];
    DiscreteSampler by_cost(draw_weight);
    if (!(by_cost.total() > 0.0)) break;  // already at cost 0

    double best_delta = 0.0;
    std::size_t best_q = 0;
    int best_r = -1;
    for (std::size_t cand = 0; cand < k; ++cand) {
      const std::size_t q = by_cost.draw(rng);
      const double* qp = pts.row(q);
      // delta(remove r) = base + adjust[r]; base covers points that keep
      // their center, adjust[r] re-routes r's points to their runner-up.
      double base = 0.0;
      std::fill(adjust.begin(), adjust.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double cq = cost_from_sq(squared_distance(pts.row(i), qp, d), z);
        const double keep = std::min(c1[i], cq);
        base += mass[i] * (keep - c1[i]);
        adjust[idx1[i]] += mass[i] * (std::min(c2[i], cq) - keep);
      }
      for (std::size_t r = 0; r < k; ++r) {
        const double delta = base + adjust[r];
        if (delta < best_delta) {
          best_delta = delta;
          best_q = q;
          best_r = static_cast<int>(r);
        }
      }
    }

    if (best_r >= 0 && -best_delta > kMinRelImprovement * cur_cost) {
      std::copy_n(pts.row(best_q), d, best.centers.row(best_r));
      recompute(cur_cost);
      idle_sweeps = 0;
    } else {
      ++idle_sweeps;
    }
  }
  return best;
}

Solution local_search_refine(const PointSet& p, const Solution& s, int z, int max_swaps,
                             std::uint64_t seed) {
  return local_search_refine_weighted(p.coords, as_mass(p), s, z, max_swaps, seed);
}

Clustering build_clustering_weighted(const Matrix& pts, std::span<const double> mass,
                                     const Solution& s, int z) {
  require_same_dim(pts.cols, s.dim(), "points and solution dimensions differ");
  Clustering clu;
  clu.solution = s;
  clu.assignment.resize(pts.rows);
  clu.point_cost.resize(pts.rows);
  clu.cluster_size.assign(s.k(), 0);
  clu.cluster_cost.assign(s.k(), 0.0);
  clu.delta.assign(s.k(), 0.0);
  std::vector<double> cluster_mass(s.k(), 0.0);
  for (std::size_t i = 0; i < pts.rows; ++i) {
    const Nearest n = nearest_center(pts.row(i), s.centers);
    clu.assignment[i] = n.index;
    clu.point_cost[i] = cost_from_sq(n.sq, z);
    cluster_mass[n.index] += mass[i];
    clu.cluster_cost[n.index] += mass[i] * clu.point_cost[i];
  }
  for (std::size_t c = 0; c < s.k(); ++c) {
    clu.cluster_size[c] = std::llround(cluster_mass[c]);
    clu.delta[c] = cluster_mass[c] > 0.0 ? clu.cluster_cost[c] / cluster_mass[c] : 0.0;
  }
  return clu;
}

Clustering build_clustering(const PointSet& p, const Solution& s, int z) {
  return build_clustering_weighted(p.coords, as_mass(p), s, z);
}

}  // namespace coreset
