#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "coreset/matrix.hpp"
#include "coreset/seeding.hpp"

namespace coreset {

enum class LabelKind : std::uint8_t { Proxied, Main, MainMax, Outer, OuterMax };

/// Identity of a sampled group. j is the dyadic ring index (Main/MainMax
/// only), b the cost-share bucket (Main/Outer only).
struct GroupKey {
  LabelKind kind = LabelKind::Main;
  std::int32_t j = 0;
  std::int32_t b = 0;

  auto operator<=>(const GroupKey&) const = default;
  std::string to_string() const;
  static GroupKey parse(const std::string& s);
};

struct Group {
  GroupKey key;
  std::vector<std::size_t> members;  // point indices, ascending
  double cost = 0.0;                 // sum of mult * cost(p, A) over members
  std::int64_t mass = 0;             // sum of multiplicities
};

enum class RingClass : std::uint8_t { Inner, Main, Outer };

struct RingDecomposition {
  std::vector<RingClass> cls;    // per point
  std::vector<std::int32_t> j;   // per point; only meaningful when cost(p,A) > 0

  static constexpr std::int32_t kNoRing = INT32_MIN;
};

struct GroupCatalog {
  std::vector<LabelKind> label;               // per point
  std::vector<std::int32_t> point_group;      // per point: index into groups, -1 if Proxied
  std::vector<std::int32_t> ring_j;           // per point ring index (kNoRing when cost = 0)
  std::vector<Group> groups;                  // nonempty sampled groups, sorted by key
  std::vector<std::int32_t> cluster_outer_group;  // per cluster: outer group index or -1
};

/// Dyadic ring classification: j = floor(log2(cost(p,A)/delta_C)), with the
/// Inner/Main/Outer split by the (eps/z)^z and (z/eps)^(2z) thresholds.
/// Points with cost 0 are Inner.
RingDecomposition ring_decompose(const Clustering& clu, const PowerParams& params);

/// Buckets (cluster, ring) cells into main groups and whole-cluster outer
/// rings into outer groups by their share of the ring-level cost. Min buckets
/// (b <= 0) and inner points are Proxied.
GroupCatalog build_groups(const PointSet& p, const Clustering& clu, const RingDecomposition& rings,
                          const PowerParams& params);

/// Real-mass variant; Group::mass is the rounded mass (informational).
GroupCatalog build_groups_weighted(std::span<const double> mass, const Clustering& clu,
                                   const RingDecomposition& rings, const PowerParams& params);

/// All points of clusters whose outer ring intersects the given outer group.
std::vector<std::size_t> outer_support(const GroupCatalog& cat, const Clustering& clu,
                                       std::size_t group_index);

}  // namespace coreset
