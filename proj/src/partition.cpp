#include "coreset/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coreset/metric.hpp"

namespace coreset {

std::string GroupKey::to_string() const {
  switch (kind) {
    case LabelKind::Main: return "M:" + std::to_string(j) + ":" + std::to_string(b);
    case LabelKind::MainMax: return "Mmax:" + std::to_string(j);
    case LabelKind::Outer: return "O:" + std::to_string(b);
    case LabelKind::OuterMax: return "Omax";
    case LabelKind::Proxied: break;
  }
  return "proxied";
}

GroupKey GroupKey::parse(const std::string& s) {
  GroupKey key;
  auto field = [&](std::size_t pos) { return std::stoi(s.substr(pos)); };
  if (s.rfind("Mmax:", 0) == 0) {
    key.kind = LabelKind::MainMax;
    key.j = field(5);
  } else if (s.rfind("M:", 0) == 0) {
    key.kind = LabelKind::Main;
    const auto sep = s.find(':', 2);
    if (sep == std::string::npos) fail(errc::io_malformed_record, "group id: " + s);
    key.j = field(2);
    key.b = field(sep + 1);
  } else if (s == "Omax") {
    key.kind = LabelKind::OuterMax;
  } else if (s.rfind("O:", 0) == 0) {
    key.kind = LabelKind::Outer;
    key.b = field(2);
  } else {
    fail(errc::io_malformed_record, "group id: " + s);
  }
  return key;
}

RingDecomposition ring_decompose(const Clustering& clu, const PowerParams& params) {
  params.validate();
  const std::size_t n = clu.assignment.size();
  RingDecomposition out;
  out.cls.assign(n, RingClass::Inner);
  out.j.assign(n, RingDecomposition::kNoRing);

  const double z = params.z;
  const double inner_factor = pow_int(params.epsilon / z, params.z);
  const double outer_factor = pow_int(z / params.epsilon, 2 * params.z);

  for (std::size_t i = 0; i < n; ++i) {
    const double cost = clu.point_cost[i];
    if (cost <= 0.0) continue;  // Inner by convention
    const double delta = clu.delta[clu.assignment[i]];
    out.j[i] = std::ilogb(cost / delta);
    if (cost <= inner_factor * delta)
      out.cls[i] = RingClass::Inner;
    else if (cost > outer_factor * delta)
      out.cls[i] = RingClass::Outer;
    else
      out.cls[i] = RingClass::Main;
  }
  return out;
}

GroupCatalog build_groups_weighted(std::span<const double> mass, const Clustering& clu,
                                   const RingDecomposition& rings, const PowerParams& params) {
  const std::size_t n = mass.size();
  const std::size_t k = clu.k();
  GroupCatalog cat;
  cat.label.assign(n, LabelKind::Proxied);
  cat.point_group.assign(n, -1);
  cat.ring_j = rings.j;
  cat.cluster_outer_group.assign(k, -1);

  const double share_factor = pow_int(params.epsilon / (4.0 * params.z), params.z);
  const double max_bucket = params.z * std::log2(4.0 * params.z / params.epsilon);

  // Main cells: (cluster, ring) -> cost and members; R_j totals across clusters.
  struct Cell {
    double cost = 0.0;
    std::vector<std::size_t> members;
  };
  std::map<std::pair<std::int32_t, int>, Cell> cells;  // (j, cluster) -> cell
  std::map<std::int32_t, double> ring_cost;            // j -> cost(R_j, A)
  std::map<int, Cell> outer_cells;                     // cluster -> outer ring of that cluster
  double outer_total = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double c = mass[i] * clu.point_cost[i];
    if (rings.cls[i] == RingClass::Main) {
      Cell& cell = cells[{rings.j[i], clu.assignment[i]}];
      cell.cost += c;
      cell.members.push_back(i);
      ring_cost[rings.j[i]] += c;
    } else if (rings.cls[i] == RingClass::Outer) {
      Cell& cell = outer_cells[clu.assignment[i]];
      cell.cost += c;
      cell.members.push_back(i);
      outer_total += c;
    }
  }

  std::map<GroupKey, Group> groups;
  std::map<GroupKey, double> group_mass;
  auto bucket_of = [&](double cell_cost, double level_cost) {
    return std::ilogb(cell_cost * static_cast<double>(k) / (share_factor * level_cost));
  };
  auto place = [&](const Cell& cell, GroupKey key) {
    Group& g = groups[key];
    g.key = key;
    g.cost += cell.cost;
    double cell_mass = 0.0;
    for (std::size_t i : cell.members) {
      g.members.push_back(i);
      cell_mass += mass[i];
    }
    group_mass[key] += cell_mass;
  };

  for (const auto& [jc, cell] : cells) {
    const int b = bucket_of(cell.cost, ring_cost[jc.first]);
    if (b <= 0) continue;  // min bucket -> Proxied
    GroupKey key;
    if (static_cast<double>(b) >= max_bucket)
      key = {LabelKind::MainMax, jc.first, 0};
    else
      key = {LabelKind::Main, jc.first, b};
    place(cell, key);
  }
  for (const auto& [cluster, cell] : outer_cells) {
    const int b = bucket_of(cell.cost, outer_total);
    if (b <= 0) continue;
    GroupKey key;
    if (static_cast<double>(b) >= max_bucket)
      key = {LabelKind::OuterMax, 0, 0};
    else
      key = {LabelKind::Outer, 0, b};
    place(cell, key);
  }

  // Members were appended per (j, cluster) cell in map order; groups merging
  // several cells need ascending point order restored.
  cat.groups.reserve(groups.size());
  for (auto& [key, g] : groups) {
    std::sort(g.members.begin(), g.members.end());
    g.mass = std::llround(group_mass[key]);
    cat.groups.push_back(std::move(g));
  }
  for (std::size_t gi = 0; gi < cat.groups.size(); ++gi) {
    const Group& g = cat.groups[gi];
    for (std::size_t i : g.members) {
      cat.label[i] = g.key.kind;
      cat.point_group[i] = static_cast<std::int32_t>(gi);
    }
    if (g.key.kind == LabelKind::Outer || g.key.kind == LabelKind::OuterMax)
      for (std::size_t i : g.members)
        cat.cluster_outer_group[clu.assignment[i]] = static_cast<std::int32_t>(gi);
  }
  return cat;
}

GroupCatalog build_groups(const PointSet& p, const Clustering& clu, const RingDecomposition& rings,
                          const PowerParams& params) {
  std::vector<double> mass(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) mass[i] = static_cast<double>(p.multiplicity[i]);
  return build_groups_weighted(mass, clu, rings, params);
}

std::vector<std::size_t> outer_support(const GroupCatalog& cat, const Clustering& clu,
                                       std::size_t group_index) {
  if (group_index >= cat.groups.size())
    fail(errc::invalid_argument, "group index out of range");
  const LabelKind kind = cat.groups[group_index].key.kind;
  if (kind != LabelKind::Outer && kind != LabelKind::OuterMax)
    fail(errc::not_outer_group, "outer_support requires an outer group");

  std::vector<bool> in_support(clu.k(), false);
  for (std::size_t c = 0; c < clu.k(); ++c)
    if (cat.cluster_outer_group[c] == static_cast<std::int32_t>(group_index)) in_support[c] = true;

  std::vector<std::size_t> points;
  for (std::size_t i = 0; i < clu.assignment.size(); ++i)
    if (in_support[clu.assignment[i]]) points.push_back(i);
  return points;
}

}  // namespace coreset
