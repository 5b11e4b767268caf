#pragma once

#include <optional>
#include <utility>

#include "coreset/partition.hpp"

namespace coreset {

struct SamplerConfig {
  std::int64_t delta = 0;  // draws per group; 0 lets build_coreset use default_delta
  std::uint64_t seed = 0;
  double c_delta = 200.0;       // leading constant of the default delta formula
  bool use_min_factor = false;  // apply the min(eps^-z, k) variance factor
  std::optional<std::size_t> project_dim;
  int refine_sweeps = 1;  // local-search sweeps after D^z seeding
  std::optional<std::size_t> precoreset_bound;  // distinct-point cap triggering a pre-pass
  std::optional<double> weight_scale;           // rounding scale; auto when unset
  bool exact_real_weights = false;  // sample prop. to w*cost, skip integer rounding
};

struct Provenance {
  enum class Kind : std::uint8_t { Sampled, Center };
  Kind kind = Kind::Sampled;
  GroupKey group;             // when Sampled
  std::int32_t cluster = -1;  // when Center

  std::string to_string() const;
  static Provenance parse(const std::string& s);
  bool operator==(const Provenance&) const = default;
};

struct WeightedCoreset {
  Matrix points;
  std::vector<double> weights;
  double offset = 0.0;  // always 0 for this construction
  std::vector<Provenance> prov;

  std::size_t size() const { return points.rows; }
  double total_weight() const {
    double t = 0.0;
    for (double w : weights) t += w;
    return t;
  }
};

/// ceil(c_delta * k * ln(k/eps) * eps^-2 [* min(eps^-z, k)]), capped at the
/// total mass N (capped flag set when the cap bites).
std::int64_t default_delta(int k, const PowerParams& params, const SamplerConfig& cfg,
                           std::int64_t total_mass, bool* capped = nullptr);

/// cfg.delta independent draws with replacement from the group, probability
/// proportional to mult * cost(p,A), each draw weighted
/// cost(G,A)/(delta * cost(p,A)); duplicates aggregated. Deterministic given
/// cfg.seed (substream derived from the group key).
std::vector<std::pair<std::size_t, double>> sample_group(const PointSet& p, const Clustering& clu,
                                                         const GroupCatalog& cat,
                                                         std::size_t group_index,
                                                         const SamplerConfig& cfg);

/// Per cluster, the total multiplicity of Proxied points; zero-weight
/// clusters omitted. Pairs are (cluster index, weight).
std::vector<std::pair<int, double>> proxy_centers(const PointSet& p, const Clustering& clu,
                                                  const GroupCatalog& cat);

struct PreprocessResult {
  PointSet points;
  std::int64_t dropped_zero_weight = 0;
  double scale = 1.0;
  bool projected = false;
  std::size_t projection_dim = 0;
  bool projection_identity_warning = false;  // requested dim >= d
  bool precoreset_applied = false;
};

/// Rounds real weights to integer multiplicities (scale auto-chosen so the
/// smallest positive weight maps to >= 1), optionally projects with a
/// Gaussian map, optionally runs one plain sensitivity-sampling pass when the
/// distinct-point count exceeds cfg.precoreset_bound.
PreprocessResult preprocess(const RawPoints& raw, int k, const PowerParams& params,
                            const SamplerConfig& cfg);

struct GroupStat {
  GroupKey key;
  std::int64_t mass = 0;
  double cost = 0.0;
  std::int64_t draws = 0;
  std::int64_t distinct_sampled = 0;
};

struct BuildInfo {
  std::int64_t delta = 0;
  bool delta_capped = false;
  double c_delta = 0.0;
  bool use_min_factor = false;
  std::uint64_t seed = 0;
  double seeding_cost = 0.0;  // cost(P, A)
  std::int64_t total_mass = 0;
  double total_weight = 0.0;
  std::int64_t proxied_mass = 0;
  std::vector<GroupStat> groups;
  // preprocess summary
  std::int64_t dropped_zero_weight = 0;
  double scale = 1.0;
  bool projected = false;
  std::size_t projection_dim = 0;
  bool precoreset_applied = false;
};

struct BuildResult {
  PointSet points;  // the preprocessed instance the coreset approximates
  WeightedCoreset coreset;
  Clustering clustering;
  GroupCatalog catalog;
  BuildInfo info;
};

/// The full Algorithm-1 pipeline: preprocess, seed, partition, sample every
/// nonempty group, weigh centers by their proxied mass. Deterministic given
/// cfg.seed.
BuildResult build_coreset(const RawPoints& raw, int k, const PowerParams& params,
                          const SamplerConfig& cfg);
BuildResult build_coreset(const PointSet& p, int k, const PowerParams& params,
                          const SamplerConfig& cfg);

}  // namespace coreset
