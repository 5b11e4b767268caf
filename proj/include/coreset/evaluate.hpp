#pragma once

#include <span>
#include <string>

#include "coreset/sampler.hpp"

namespace coreset {

struct SuiteSpec {
  enum class Kind { RandomBox, SubsetOfP, DzSeeded, LloydRefined, CoresetAdversarial, HadamardFamily };
  Kind kind = Kind::RandomBox;
  int count = 0;
  std::uint64_t seed = 0;

  static const char* kind_name(Kind k);
  static Kind kind_from_name(const std::string& name);
};

/// |cost(Omega,S) + offset - cost(P,S)| / cost(P,S).
double distortion(const PointSet& p, const WeightedCoreset& omega, const Solution& s, int z);

/// Deterministic solution generators. CoresetAdversarial seeds and refines on
/// the coreset itself and needs omega; HadamardFamily requires P to be a
/// basis instance (standard unit vectors in R^(2d)).
std::vector<Solution> generate_suite(const PointSet& p, int k, int z, const SuiteSpec& spec,
                                     const WeightedCoreset* omega = nullptr);

struct DistortionReport {
  struct Row {
    std::string suite;
    int index = 0;
    double cost_p = 0.0;
    double cost_coreset = 0.0;
    double error = 0.0;
  };
  std::vector<Row> rows;
  std::size_t solutions_evaluated = 0;
  std::size_t solutions_skipped_zero_cost = 0;
  double max_error = 0.0;
  double mean_error = 0.0;
  double p50 = 0.0, p90 = 0.0, p99 = 0.0;
  double total_weight = 0.0;
  double total_mass = 0.0;
  double eps = 0.0;
  int z = 0;
  int k = 0;
  bool weight_within_2eps = false;
  // echoed build metadata, when available
  std::int64_t delta = 0;
  std::uint64_t seed = 0;
  double c_delta = 0.0;
};

/// Evaluates distortion for every suite solution (zero-cost denominators are
/// skipped), aggregates, and checks w(Omega) in (1 +- 2 eps) N.
DistortionReport audit(const PointSet& p, const WeightedCoreset& omega,
                       std::span<const SuiteSpec> suites, int k, const PowerParams& params,
                       const BuildInfo* info = nullptr);

/// Control arm: uniform mass sample with replacement, each draw weighted
/// N/size, duplicates aggregated.
WeightedCoreset uniform_baseline(const PointSet& p, std::int64_t size, std::uint64_t seed);

/// Weighted Lloyd (z = 2) or sampled-candidate medoid (z != 2) refinement;
/// used by LloydRefined and CoresetAdversarial suites.
Solution lloyd_refine_weighted(const Matrix& pts, std::span<const double> mass, Solution s, int z,
                               int max_iters, std::uint64_t seed);

}  // namespace coreset
