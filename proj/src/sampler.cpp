#include "coreset/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coreset/metric.hpp"
#include "coreset/projection.hpp"
#include "coreset/rng.hpp"

namespace coreset {

namespace {

// Substream tags for the pipeline stages.
constexpr std::uint64_t kTagSeeding = 0x5eed;
constexpr std::uint64_t kTagRefine = 0x5afe;
constexpr std::uint64_t kTagProjection = 0x9401;
constexpr std::uint64_t kTagPrecoreset = 0x9c0e;
constexpr std::uint64_t kTagGroup = 0x6a00;

std::uint64_t group_tag(const GroupKey& key) {
  const std::uint64_t kind = static_cast<std::uint64_t>(key.kind);
  const std::uint64_t j = static_cast<std::uint32_t>(key.j);
  const std::uint64_t b = static_cast<std::uint32_t>(key.b);
  return substream_seed(kTagGroup ^ (kind << 56), (j << 32) | b);
}

std::vector<std::pair<std::size_t, double>> sample_group_impl(
    std::span<const double> mass, const Clustering& clu, const Group& g, std::int64_t delta,
    std::uint64_t master_seed) {
  if (g.members.empty()) fail(errc::invalid_argument, "cannot sample an empty group");
  if (delta < 1) fail(errc::invalid_argument, "delta must be >= 1");
  if (!(g.cost > 0.0)) fail(errc::group_zero_cost, "group " + g.key.to_string());

  std::vector<double> draw_weight(g.members.size());
  for (std::size_t m = 0; m < g.members.size(); ++m) {
    const std::size_t i = g.members[m];
    draw_weight[m] = mass[i] * clu.point_cost[i];
  }
  DiscreteSampler sampler(draw_weight);
  Rng rng(substream_seed(master_seed, group_tag(g.key)));

  std::vector<std::int64_t> draws(g.members.size(), 0);
  for (std::int64_t t = 0; t < delta; ++t) ++draws[sampler.draw(rng)];

  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t m = 0; m < g.members.size(); ++m) {
    if (draws[m] == 0) continue;
    const std::size_t i = g.members[m];
    const double per_draw = g.cost / (static_cast<double>(delta) * clu.point_cost[i]);
    out.emplace_back(i, static_cast<double>(draws[m]) * per_draw);
  }
  return out;
}

std::vector<std::pair<int, double>> proxy_centers_impl(std::span<const double> mass,
                                                       const Clustering& clu,
                                                       const GroupCatalog& cat) {
  std::vector<double> proxied(clu.k(), 0.0);
  for (std::size_t i = 0; i < mass.size(); ++i)
    if (cat.label[i] == LabelKind::Proxied) proxied[clu.assignment[i]] += mass[i];
  std::vector<std::pair<int, double>> out;
  for (std::size_t c = 0; c < clu.k(); ++c)
    if (proxied[c] > 0.0) out.emplace_back(static_cast<int>(c), proxied[c]);
  return out;
}

std::vector<double> as_mass(const PointSet& p) {
  std::vector<double> w(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) w[i] = static_cast<double>(p.multiplicity[i]);
  return w;
}

// Shared tail of build_coreset once coordinates and masses are fixed.
BuildResult assemble(std::span<const double> mass, PointSet instance, int k,
                     const PowerParams& params, const SamplerConfig& cfg,
                     const PreprocessResult& pre) {
  BuildResult result;
  result.points = std::move(instance);
  const Matrix& pts = result.points.coords;

  Solution seeded = dz_seed_weighted(pts, mass, k, params.z, substream_seed(cfg.seed, kTagSeeding));
  if (cfg.refine_sweeps > 0)
    seeded = local_search_refine_weighted(pts, mass, seeded, params.z, cfg.refine_sweeps,
                                          substream_seed(cfg.seed, kTagRefine));
  result.clustering = build_clustering_weighted(pts, mass, seeded, params.z);

  const RingDecomposition rings = ring_decompose(result.clustering, params);
  result.catalog = build_groups_weighted(mass, result.clustering, rings, params);

  double total_mass = 0.0;
  for (double m : mass) total_mass += m;

  BuildInfo& info = result.info;
  info.seed = cfg.seed;
  info.c_delta = cfg.c_delta;
  info.use_min_factor = cfg.use_min_factor;
  info.total_mass = std::llround(total_mass);
  info.seeding_cost = 0.0;
  for (std::size_t i = 0; i < pts.rows; ++i)
    info.seeding_cost += mass[i] * result.clustering.point_cost[i];
  info.dropped_zero_weight = pre.dropped_zero_weight;
  info.scale = pre.scale;
  info.projected = pre.projected;
  info.projection_dim = pre.projection_dim;
  info.precoreset_applied = pre.precoreset_applied;

  if (cfg.delta > 0) {
    info.delta = cfg.delta;
  } else {
    info.delta = default_delta(k, params, cfg, info.total_mass, &info.delta_capped);
  }

  WeightedCoreset& coreset = result.coreset;
  coreset.points = Matrix(0, pts.cols);
  for (const Group& g : result.catalog.groups) {
    auto picks = sample_group_impl(mass, result.clustering, g, info.delta, cfg.seed);
    GroupStat stat{g.key, g.mass, g.cost, info.delta, static_cast<std::int64_t>(picks.size())};
    info.groups.push_back(stat);
    for (const auto& [i, w] : picks) {
      coreset.points.append_row(pts.row(i));
      coreset.weights.push_back(w);
      coreset.prov.push_back({Provenance::Kind::Sampled, g.key, -1});
    }
  }
  for (const auto& [c, w] : proxy_centers_impl(mass, result.clustering, result.catalog)) {
    coreset.points.append_row(result.clustering.solution.centers.row(c));
    coreset.weights.push_back(w);
    coreset.prov.push_back({Provenance::Kind::Center, GroupKey{}, c});
    info.proxied_mass += std::llround(w);
  }
  coreset.offset = 0.0;
  info.total_weight = coreset.total_weight();
  return result;
}

}  // namespace

std::string Provenance::to_string() const {
  if (kind == Kind::Center) return "C:" + std::to_string(cluster);
  return "S:" + group.to_string();
}

Provenance Provenance::parse(const std::string& s) {
  Provenance p;
  if (s.rfind("C:", 0) == 0) {
    p.kind = Kind::Center;
    p.cluster = std::stoi(s.substr(2));
  } else if (s.rfind("S:", 0) == 0) {
    p.kind = Kind::Sampled;
    p.group = GroupKey::parse(s.substr(2));
  } else {
    fail(errc::io_malformed_record, "provenance tag: " + s);
  }
  return p;
}

std::int64_t default_delta(int k, const PowerParams& params, const SamplerConfig& cfg,
                           std::int64_t total_mass, bool* capped) {
  params.validate();
  if (k < 1) fail(errc::invalid_argument, "k must be >= 1");
  const double eps = params.epsilon;
  double raw = cfg.c_delta * static_cast<double>(k) * std::log(static_cast<double>(k) / eps) /
               (eps * eps);
  if (cfg.use_min_factor)
    raw *= std::min(1.0 / pow_int(eps, params.z), static_cast<double>(k));
  double value = std::ceil(raw);
  if (capped) *capped = false;
  if (!(value >= 1.0)) value = 1.0;
  if (value > static_cast<double>(total_mass)) {
    value = static_cast<double>(total_mass);
    if (capped) *capped = true;
  }
  return static_cast<std::int64_t>(value);
}

std::vector<std::pair<std::size_t, double>> sample_group(const PointSet& p, const Clustering& clu,
                                                         const GroupCatalog& cat,
                                                         std::size_t group_index,
                                                         const SamplerConfig& cfg) {
  if (group_index >= cat.groups.size())
    fail(errc::invalid_argument, "group index out of range");
  return sample_group_impl(as_mass(p), clu, cat.groups[group_index], cfg.delta, cfg.seed);
}

std::vector<std::pair<int, double>> proxy_centers(const PointSet& p, const Clustering& clu,
                                                  const GroupCatalog& cat) {
  return proxy_centers_impl(as_mass(p), clu, cat);
}

PreprocessResult preprocess(const RawPoints& raw, int k, const PowerParams& params,
                            const SamplerConfig& cfg) {
  params.validate();
  if (raw.coords.rows == 0) fail(errc::invalid_argument, "empty input");
  if (!raw.coords.all_finite()) fail(errc::io_bad_value, "non-finite coordinate");
  if (!raw.weights.empty() && raw.weights.size() != raw.coords.rows)
    fail(errc::invalid_argument, "weight count does not match point count");

  PreprocessResult out;

  // (a) Round real weights to integer multiplicities.
  Matrix coords = raw.coords;
  std::vector<std::int64_t> mult;
  {
    std::vector<double> w = raw.weights;
    if (w.empty()) w.assign(coords.rows, 1.0);
    double min_pos = 0.0;
    for (double v : w) {
      if (v < 0.0) fail(errc::io_negative_weight, "negative input weight");
      if (v > 0.0 && (min_pos == 0.0 || v < min_pos)) min_pos = v;
    }
    if (min_pos == 0.0) fail(errc::invalid_argument, "all input weights are zero");
    out.scale = cfg.weight_scale.value_or(min_pos >= 1.0 ? 1.0 : 1.0 / min_pos);

    Matrix kept(0, coords.cols);
    for (std::size_t i = 0; i < coords.rows; ++i) {
      const std::int64_t m = std::llround(w[i] * out.scale);
      if (m < 1) {
        ++out.dropped_zero_weight;
        continue;
      }
      kept.append_row(coords.row(i));
      mult.push_back(m);
    }
    if (kept.rows == 0) fail(errc::invalid_argument, "all points dropped by weight rounding");
    coords = std::move(kept);
  }

  // (b) Optional Gaussian projection.
  if (cfg.project_dim) {
    const ProjectionMap map =
        make_projection(coords.cols, *cfg.project_dim, substream_seed(cfg.seed, kTagProjection));
    out.projection_identity_warning = map.identity;
    if (!map.identity) {
      coords = apply(map, coords);
      out.projected = true;
    }
    out.projection_dim = map.target_dim;
  }

  PointSet p(std::move(coords), std::move(mult));

  // (c) Optional pre-coreset pass to enforce the distinct-point bound.
  if (cfg.precoreset_bound && distinct_point_count(p.coords) > *cfg.precoreset_bound) {
    const std::uint64_t seed = substream_seed(cfg.seed, kTagPrecoreset);
    const Solution a0 = dz_seed(p, k, params.z, seed);
    const Assignment asg = assign(p, a0, params.z);
    double total = 0.0;
    std::vector<double> draw_weight(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) {
      draw_weight[i] = static_cast<double>(p.multiplicity[i]) * asg.cost[i];
      total += draw_weight[i];
    }
    const std::int64_t draws = static_cast<std::int64_t>(*cfg.precoreset_bound);
    std::vector<double> sampled_weight(p.n(), 0.0);
    if (total > 0.0) {
      DiscreteSampler sampler(draw_weight);
      Rng rng(substream_seed(seed, 1));
      for (std::int64_t t = 0; t < draws; ++t) {
        const std::size_t i = sampler.draw(rng);
        sampled_weight[i] += total / (static_cast<double>(draws) * asg.cost[i]);
      }
    }
    // Zero-cost points (the seeded centers) keep their own mass; sampling
    // proportional to cost can never pick them.
    RawPoints reduced;
    reduced.coords = Matrix(0, p.dim());
    for (std::size_t i = 0; i < p.n(); ++i) {
      double w = sampled_weight[i];
      if (asg.cost[i] == 0.0) w += static_cast<double>(p.multiplicity[i]);
      if (w <= 0.0) continue;
      reduced.coords.append_row(p.coords.row(i));
      reduced.weights.push_back(w);
    }
    SamplerConfig inner = cfg;
    inner.precoreset_bound.reset();
    inner.project_dim.reset();
    inner.weight_scale.reset();
    PreprocessResult rounded = preprocess(reduced, k, params, inner);
    out.points = std::move(rounded.points);
    out.dropped_zero_weight += rounded.dropped_zero_weight;
    out.precoreset_applied = true;
    return out;
  }

  out.points = std::move(p);
  return out;
}

BuildResult build_coreset(const RawPoints& raw, int k, const PowerParams& params,
                          const SamplerConfig& cfg) {
  params.validate();
  if (cfg.exact_real_weights) {
    // Keep real weights as masses, no integer rounding.
    std::vector<double> mass = raw.weights;
    if (mass.empty()) mass.assign(raw.coords.rows, 1.0);
    for (double w : mass)
      if (w < 0.0) fail(errc::io_negative_weight, "negative input weight");
    Matrix coords = raw.coords;
    PreprocessResult pre;
    if (cfg.project_dim) {
      const ProjectionMap map =
          make_projection(coords.cols, *cfg.project_dim, substream_seed(cfg.seed, kTagProjection));
      pre.projection_identity_warning = map.identity;
      if (!map.identity) {
        coords = apply(map, coords);
        pre.projected = true;
      }
      pre.projection_dim = map.target_dim;
    }
    PointSet instance(coords);  // unit multiplicities; real masses ride along
    return assemble(mass, std::move(instance), k, params, cfg, pre);
  }

  PreprocessResult pre = preprocess(raw, k, params, cfg);
  PointSet instance = pre.points;
  const std::vector<double> mass = as_mass(instance);
  return assemble(mass, std::move(instance), k, params, cfg, pre);
}

BuildResult build_coreset(const PointSet& p, int k, const PowerParams& params,
                          const SamplerConfig& cfg) {
  return build_coreset(RawPoints::from_point_set(p), k, params, cfg);
}

}  // namespace coreset
