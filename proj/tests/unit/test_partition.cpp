#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "coreset/gen.hpp"
#include "coreset/metric.hpp"
#include "coreset/partition.hpp"
#include "coreset/rng.hpp"

using namespace coreset;

namespace {

// A clustering with prescribed per-point costs in a single cluster.
Clustering synthetic_clustering(const std::vector<double>& costs) {
  Clustering clu;
  clu.solution = Solution(Matrix(1, 1));
  clu.assignment.assign(costs.size(), 0);
  clu.point_cost = costs;
  double total = 0.0;
  for (double c : costs) total += c;
  clu.cluster_size = {static_cast<std::int64_t>(costs.size())};
  clu.cluster_cost = {total};
  clu.delta = {total / static_cast<double>(costs.size())};
  return clu;
}

struct Pipeline {
  PointSet points;
  Clustering clu;
  RingDecomposition rings;
  GroupCatalog cat;
};

Pipeline run_pipeline(const PointSet& p, int k, const PowerParams& params, std::uint64_t seed) {
  Pipeline out;
  out.points = p;
  const Solution s = dz_seed(p, k, params.z, seed);
  out.clu = build_clustering(p, s, params.z);
  out.rings = ring_decompose(out.clu, params);
  out.cat = build_groups(p, out.clu, out.rings, params);
  return out;
}

}  // namespace

TEST_CASE("ring_decompose threshold cases") {
  SUBCASE("cost equal to the cluster average lands in ring 0, Main") {
    const Clustering clu = synthetic_clustering({1.0, 1.0});
    const RingDecomposition rings = ring_decompose(clu, {1, 0.1});
    CHECK(rings.j[0] == 0);
    CHECK(rings.cls[0] == RingClass::Main);
  }
  SUBCASE("zero cost is Inner") {
    const Clustering clu = synthetic_clustering({0.0, 2.0});
    const RingDecomposition rings = ring_decompose(clu, {2, 0.2});
    CHECK(rings.cls[0] == RingClass::Inner);
    CHECK(rings.j[0] == RingDecomposition::kNoRing);
  }
  SUBCASE("all-main example near eps = 1/2") {
    // Delta = 1.6; inner cutoff ~0.8, outer cutoff ~6.4: every cost is Main.
    const Clustering clu = synthetic_clustering({1.0, 1.0, 1.0, 1.0, 4.0});
    const RingDecomposition rings = ring_decompose(clu, {1, 0.499});
    for (std::size_t i = 0; i < 5; ++i) CHECK(rings.cls[i] == RingClass::Main);
  }
}

TEST_CASE("ring membership matches the stored dyadic index") {
  const auto pl = run_pipeline(gen_uniform_points(300, 3, 21), 4, {2, 0.2}, 9);
  for (std::size_t i = 0; i < pl.points.n(); ++i) {
    if (pl.rings.cls[i] != RingClass::Main) continue;
    const double cost = pl.clu.point_cost[i];
    const double delta = pl.clu.delta[pl.clu.assignment[i]];
    const int j = pl.rings.j[i];
    CHECK(std::ilogb(cost / delta) == j);
    CHECK(cost >= std::ldexp(1.0, j) * delta * (1.0 - 1e-12));
    CHECK(cost < std::ldexp(1.0, j + 1) * delta * (1.0 + 1e-12));
  }
}

TEST_CASE("build_groups on a single cluster with equal costs") {
  // One cluster, every point at the same positive cost: a single ring cell
  // that owns the whole ring cost, so its bucket is floor(z log2(4z/eps)).
  Matrix m(5, 1);
  for (int i = 0; i < 5; ++i) m.at(i, 0) = 10.0;
  PointSet p(std::move(m));
  const PowerParams params{1, 0.3};
  Matrix center(1, 1);
  const Clustering clu = build_clustering(p, Solution(center), params.z);
  const RingDecomposition rings = ring_decompose(clu, params);
  const GroupCatalog cat = build_groups(p, clu, rings, params);

  REQUIRE(cat.groups.size() == 1);
  const int expect_b = std::ilogb(pow_int(4.0 * params.z / params.epsilon, params.z));
  const double max_bucket = params.z * std::log2(4.0 * params.z / params.epsilon);
  if (static_cast<double>(expect_b) >= max_bucket) {
    CHECK(cat.groups[0].key.kind == LabelKind::MainMax);
  } else {
    CHECK(cat.groups[0].key.kind == LabelKind::Main);
    CHECK(cat.groups[0].key.b == expect_b);
  }
  CHECK(cat.groups[0].members.size() == 5);
}

TEST_CASE("no outer points means no outer groups") {
  const auto pl = run_pipeline(gen_uniform_points(100, 2, 3), 3, {2, 0.2}, 5);
  bool has_outer_points = false;
  for (auto c : pl.rings.cls) has_outer_points |= c == RingClass::Outer;
  if (!has_outer_points) {
    for (const Group& g : pl.cat.groups) {
      CHECK(g.key.kind != LabelKind::Outer);
      CHECK(g.key.kind != LabelKind::OuterMax);
    }
  }
}

TEST_CASE("catalog partitions the points and is deterministic") {
  Rng rng(2024);
  for (int t = 0; t < 10; ++t) {
    PointSet p = gen_uniform_points(200, 2, rng.next_u64());
    // A few far outliers so outer rings are exercised.
    for (std::size_t i = 0; i < 5; ++i)
      p.coords.at(i, 0) += 1e5 * static_cast<double>(i + 1);
    const PowerParams params{1 + static_cast<int>(rng.below(3)),
                             0.05 + 0.3 * rng.uniform()};
    const auto pl = run_pipeline(p, 4, params, rng.next_u64());

    std::size_t labeled = 0;
    for (std::size_t i = 0; i < p.n(); ++i) {
      if (pl.cat.label[i] == LabelKind::Proxied) {
        CHECK(pl.cat.point_group[i] == -1);
        ++labeled;
      }
    }
    std::set<std::size_t> seen;
    for (const Group& g : pl.cat.groups) {
      for (std::size_t i : g.members) {
        CHECK(seen.insert(i).second);  // pairwise disjoint
        CHECK(pl.clu.point_cost[i] > 0.0);
      }
      labeled += g.members.size();
    }
    CHECK(labeled == p.n());

    // Outer single-group rule: per cluster at most one outer label.
    std::map<int, std::set<std::int32_t>> outer_groups_by_cluster;
    for (const Group& g : pl.cat.groups) {
      if (g.key.kind != LabelKind::Outer && g.key.kind != LabelKind::OuterMax) continue;
      for (std::size_t i : g.members)
        outer_groups_by_cluster[pl.clu.assignment[i]].insert(pl.cat.point_group[i]);
    }
    for (const auto& [cluster, groups] : outer_groups_by_cluster) CHECK(groups.size() == 1);

    // Bit-for-bit determinism.
    const auto again = run_pipeline(p, 4, params, 0);
    const auto base = run_pipeline(p, 4, params, 0);
    CHECK(again.cat.label == base.cat.label);
    CHECK(again.cat.point_group == base.cat.point_group);
    REQUIRE(again.cat.groups.size() == base.cat.groups.size());
    for (std::size_t g = 0; g < base.cat.groups.size(); ++g) {
      CHECK(again.cat.groups[g].key == base.cat.groups[g].key);
      CHECK(again.cat.groups[g].members == base.cat.groups[g].members);
      CHECK(again.cat.groups[g].cost == base.cat.groups[g].cost);
    }
  }
}

TEST_CASE("bucket membership matches the share formula") {
  const auto pl = run_pipeline(gen_uniform_points(400, 3, 77), 5, {2, 0.15}, 13);
  const PowerParams params{2, 0.15};
  const double share = pow_int(params.epsilon / (4.0 * params.z), params.z);
  const double k = static_cast<double>(pl.clu.k());

  // Oracle: recompute cell and ring costs from scratch.
  std::map<std::pair<int, int>, double> cell_cost;  // (j, cluster)
  std::map<int, double> ring_total;
  for (std::size_t i = 0; i < pl.points.n(); ++i) {
    if (pl.rings.cls[i] != RingClass::Main) continue;
    const double c = static_cast<double>(pl.points.multiplicity[i]) * pl.clu.point_cost[i];
    cell_cost[{pl.rings.j[i], pl.clu.assignment[i]}] += c;
    ring_total[pl.rings.j[i]] += c;
  }
  for (const auto& [jc, cost] : cell_cost) {
    const int b = std::ilogb(cost * k / (share * ring_total[jc.first]));
    // Find the label this cell's points received.
    const std::size_t probe = [&] {
      for (std::size_t i = 0; i < pl.points.n(); ++i)
        if (pl.rings.cls[i] == RingClass::Main && pl.rings.j[i] == jc.first &&
            pl.clu.assignment[i] == jc.second)
          return i;
      return std::size_t{0};
    }();
    if (b <= 0) {
      CHECK(pl.cat.label[probe] == LabelKind::Proxied);
    } else if (pl.cat.label[probe] == LabelKind::Main) {
      const Group& g = pl.cat.groups[pl.cat.point_group[probe]];
      CHECK(g.key.b == b);
      const double lo = share * std::ldexp(1.0, b) * ring_total[jc.first] / k;
      const double hi = share * std::ldexp(1.0, b + 1) * ring_total[jc.first] / k;
      CHECK(cost >= lo * (1.0 - 1e-12));
      CHECK(cost < hi * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("outer_support unions whole clusters") {
  // Three blobs of 500 coincident points plus one far outlier each. With the
  // planted centers, blob points cost 0 (Inner) and each outlier is Outer.
  // Clusters 0 and 1 share an outer bucket; cluster 2's 16x-costlier outlier
  // lands in the max bucket.
  const double blob[3][2] = {{0.0, 0.0}, {10000.0, 0.0}, {0.0, 10000.0}};
  const double radius[3] = {60.0, 60.0, 240.0};
  Matrix m(3 * 501, 2);
  std::size_t row = 0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 500; ++i, ++row) {
      m.at(row, 0) = blob[c][0];
      m.at(row, 1) = blob[c][1];
    }
    m.at(row, 0) = blob[c][0] + radius[c];
    m.at(row, 1) = blob[c][1];
    ++row;
  }
  const PointSet p(std::move(m));
  Matrix centers(3, 2);
  for (int c = 0; c < 3; ++c) {
    centers.at(c, 0) = blob[c][0];
    centers.at(c, 1) = blob[c][1];
  }
  const PowerParams params{2, 0.45};
  const Clustering clu = build_clustering(p, Solution(centers), params.z);
  const RingDecomposition rings = ring_decompose(clu, params);
  const GroupCatalog cat = build_groups(p, clu, rings, params);

  std::size_t outer_groups = 0, outer_max_groups = 0;
  for (std::size_t gi = 0; gi < cat.groups.size(); ++gi) {
    const Group& g = cat.groups[gi];
    if (g.key.kind != LabelKind::Outer && g.key.kind != LabelKind::OuterMax) {
      CHECK_THROWS_AS(outer_support(cat, clu, gi), error);
      continue;
    }
    if (g.key.kind == LabelKind::Outer) {
      ++outer_groups;
      // Both shared clusters, no duplicates: 2 * 501 member indices.
      const auto support = outer_support(cat, clu, gi);
      CHECK(support.size() == 1002);
      CHECK(std::set<std::size_t>(support.begin(), support.end()).size() == 1002);
      std::set<int> clusters;
      for (std::size_t i : support) clusters.insert(clu.assignment[i]);
      CHECK(clusters == std::set<int>{0, 1});
    } else {
      ++outer_max_groups;
      const auto support = outer_support(cat, clu, gi);
      CHECK(support.size() == 501);  // the single-cluster union
      for (std::size_t i : support) CHECK(clu.assignment[i] == 2);
    }
  }
  CHECK(outer_groups == 1);
  CHECK(outer_max_groups == 1);
  CHECK_THROWS_AS(outer_support(cat, clu, cat.groups.size()), error);
}
