#include "coreset/evaluate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "coreset/lb_instances.hpp"
#include "coreset/metric.hpp"
#include "coreset/parallel.hpp"
#include "coreset/rng.hpp"
#include "coreset/seeding.hpp"
#include "coreset/stats.hpp"

namespace coreset {

const char* SuiteSpec::kind_name(Kind k) {
  switch (k) {
    case Kind::RandomBox: return "RandomBox";
    case Kind::SubsetOfP: return "SubsetOfP";
    case Kind::DzSeeded: return "DzSeeded";
    case Kind::LloydRefined: return "LloydRefined";
    case Kind::CoresetAdversarial: return "CoresetAdversarial";
    case Kind::HadamardFamily: return "HadamardFamily";
  }
  return "?";
}

SuiteSpec::Kind SuiteSpec::kind_from_name(const std::string& name) {
  for (Kind k : {Kind::RandomBox, Kind::SubsetOfP, Kind::DzSeeded, Kind::LloydRefined,
                 Kind::CoresetAdversarial, Kind::HadamardFamily})
    if (name == kind_name(k)) return k;
  fail(errc::invalid_argument, "unknown suite kind: " + name);
}

double distortion(const PointSet& p, const WeightedCoreset& omega, const Solution& s, int z) {
  const double denom = total_cost(p, s, z);
  if (!(denom > 0.0)) fail(errc::zero_cost_denominator, "distortion undefined when cost(P,S)=0");
  const double num = total_cost_weighted(omega.points, omega.weights, s, z) + omega.offset;
  return std::abs(num - denom) / denom;
}

Solution lloyd_refine_weighted(const Matrix& pts, std::span<const double> mass, Solution s, int z,
                               int max_iters, std::uint64_t seed) {
  const std::size_t n = pts.rows, d = pts.cols, k = s.k();
  Rng rng(seed);
  std::vector<int> idx(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < n; ++i) {
      const int j = nearest_center(pts.row(i), s.centers).index;
      if (j != idx[i]) {
        idx[i] = j;
        changed = true;
      }
      members[j].push_back(i);
    }
    if (!changed && iter > 0) break;

    if (z == 2) {
      for (std::size_t j = 0; j < k; ++j) {
        if (members[j].empty()) continue;  // keep the previous center
        double total = 0.0;
        std::vector<double> mean(d, 0.0);
        for (std::size_t i : members[j]) {
          total += mass[i];
          for (std::size_t c = 0; c < d; ++c) mean[c] += mass[i] * pts.at(i, c);
        }
        if (total <= 0.0) continue;
        for (std::size_t c = 0; c < d; ++c) s.centers.at(j, c) = mean[c] / total;
      }
    } else {
      // Medoid step on a sampled candidate pool per cluster.
      constexpr std::size_t kMaxCandidates = 48;
      for (std::size_t j = 0; j < k; ++j) {
        if (members[j].empty()) continue;
        std::vector<double> member_mass(members[j].size());
        for (std::size_t m = 0; m < members[j].size(); ++m) member_mass[m] = mass[members[j][m]];
        DiscreteSampler pick(member_mass);

        auto cluster_cost = [&](const double* center) {
          double acc = 0.0;
          for (std::size_t i : members[j])
            acc += mass[i] * cost_from_sq(squared_distance(pts.row(i), center, d), z);
          return acc;
        };
        double best = cluster_cost(s.centers.row(j));
        const double* best_row = nullptr;
        const std::size_t cands = std::min(kMaxCandidates, members[j].size());
        for (std::size_t c = 0; c < cands; ++c) {
          const std::size_t i = members[j][pick.draw(rng)];
          const double cost = cluster_cost(pts.row(i));
          if (cost < best) {
            best = cost;
            best_row = pts.row(i);
          }
        }
        if (best_row != nullptr) std::copy_n(best_row, d, s.centers.row(j));
      }
    }
  }
  return s;
}

namespace {

Solution random_box_solution(const PointSet& p, int k, Rng& rng) {
  const std::size_t d = p.dim();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < p.n(); ++i)
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], p.coords.at(i, c));
      hi[c] = std::max(hi[c], p.coords.at(i, c));
    }
  Matrix centers(k, d);
  for (int j = 0; j < k; ++j)
    for (std::size_t c = 0; c < d; ++c) centers.at(j, c) = rng.uniform(lo[c], hi[c]);
  return Solution(std::move(centers));
}

Solution subset_solution(const PointSet& p, int k, Rng& rng) {
  if (static_cast<std::size_t>(k) > p.n())
    fail(errc::invalid_argument, "SubsetOfP needs k <= n");
  std::vector<std::size_t> chosen;
  std::vector<bool> used(p.n(), false);
  while (chosen.size() < static_cast<std::size_t>(k)) {
    const std::size_t i = rng.below(p.n());
    if (used[i]) continue;
    used[i] = true;
    chosen.push_back(i);
  }
  Matrix centers(k, p.dim());
  for (int j = 0; j < k; ++j) std::copy_n(p.coords.row(chosen[j]), p.dim(), centers.row(j));
  return Solution(std::move(centers));
}

BasisInstance basis_from_points(const PointSet& p) {
  const std::size_t d = p.n();
  if (p.dim() != 2 * d) fail(errc::invalid_argument, "HadamardFamily: not a basis instance");
  for (std::size_t i = 0; i < d; ++i) {
    if (p.multiplicity[i] != 1) fail(errc::invalid_argument, "HadamardFamily: weighted input");
    for (std::size_t c = 0; c < p.dim(); ++c) {
      const double expect = c == i ? 1.0 : 0.0;
      if (p.coords.at(i, c) != expect)
        fail(errc::invalid_argument, "HadamardFamily: not a basis instance");
    }
  }
  BasisInstance inst;
  inst.d = static_cast<int>(d);
  inst.points = p;
  return inst;
}

}  // namespace

std::vector<Solution> generate_suite(const PointSet& p, int k, int z, const SuiteSpec& spec,
                                     const WeightedCoreset* omega) {
  std::vector<Solution> out;
  if (spec.kind == SuiteSpec::Kind::HadamardFamily) {
    BasisInstance inst = basis_from_points(p);
    inst.k = k;
    if (k < 1 || inst.d % k != 0) fail(errc::invalid_argument, "HadamardFamily: k must divide d");
    inst.q = inst.d / k;
    if (std::popcount(static_cast<unsigned>(inst.q)) != 1)
      fail(errc::invalid_argument, "HadamardFamily: d/k must be a power of two");
    return hadamard_solutions(inst);
  }
  if (spec.kind == SuiteSpec::Kind::CoresetAdversarial && omega == nullptr)
    fail(errc::invalid_argument, "CoresetAdversarial requires a coreset");

  out.resize(spec.count);
  parallel_for(spec.count, [&](std::size_t i) {
    const std::uint64_t sub = substream_seed(spec.seed, static_cast<std::uint64_t>(spec.kind), i);
    Rng rng(sub);
    switch (spec.kind) {
      case SuiteSpec::Kind::RandomBox: out[i] = random_box_solution(p, k, rng); break;
      case SuiteSpec::Kind::SubsetOfP: out[i] = subset_solution(p, k, rng); break;
      case SuiteSpec::Kind::DzSeeded: out[i] = dz_seed(p, k, z, sub); break;
      case SuiteSpec::Kind::LloydRefined: {
        std::vector<double> mass(p.n());
        for (std::size_t m = 0; m < p.n(); ++m) mass[m] = static_cast<double>(p.multiplicity[m]);
        out[i] = lloyd_refine_weighted(p.coords, mass, subset_solution(p, k, rng), z, 20,
                                       substream_seed(sub, 1));
        break;
      }
      case SuiteSpec::Kind::CoresetAdversarial: {
        const Solution seeded =
            dz_seed_weighted(omega->points, omega->weights, k, z, substream_seed(sub, 2));
        out[i] = lloyd_refine_weighted(omega->points, omega->weights, seeded, z, 20,
                                       substream_seed(sub, 3));
        break;
      }
      default: break;
    }
  });
  return out;
}

DistortionReport audit(const PointSet& p, const WeightedCoreset& omega,
                       std::span<const SuiteSpec> suites, int k, const PowerParams& params,
                       const BuildInfo* info) {
  if (suites.empty()) fail(errc::invalid_argument, "audit requires at least one suite");
  params.validate();

  DistortionReport rep;
  rep.eps = params.epsilon;
  rep.z = params.z;
  rep.k = k;
  if (info != nullptr) {
    rep.delta = info->delta;
    rep.seed = info->seed;
    rep.c_delta = info->c_delta;
  }

  for (const SuiteSpec& spec : suites) {
    const std::vector<Solution> sols = generate_suite(p, k, params.z, spec, &omega);
    const std::size_t base = rep.rows.size();
    rep.rows.resize(base + sols.size());
    parallel_for(sols.size(), [&](std::size_t i) {
      DistortionReport::Row& row = rep.rows[base + i];
      row.suite = SuiteSpec::kind_name(spec.kind);
      row.index = static_cast<int>(i);
      row.cost_p = total_cost(p, sols[i], params.z);
      row.cost_coreset =
          total_cost_weighted(omega.points, omega.weights, sols[i], params.z) + omega.offset;
      row.error = row.cost_p > 0.0 ? std::abs(row.cost_coreset - row.cost_p) / row.cost_p : -1.0;
    });
  }

  // Drop zero-denominator rows, then aggregate.
  std::vector<DistortionReport::Row> kept;
  kept.reserve(rep.rows.size());
  for (auto& row : rep.rows) {
    if (row.error < 0.0)
      ++rep.solutions_skipped_zero_cost;
    else
      kept.push_back(std::move(row));
  }
  rep.rows = std::move(kept);
  rep.solutions_evaluated = rep.rows.size();

  std::vector<double> errs;
  errs.reserve(rep.rows.size());
  double sum = 0.0;
  for (const auto& row : rep.rows) {
    errs.push_back(row.error);
    sum += row.error;
    rep.max_error = std::max(rep.max_error, row.error);
  }
  if (!errs.empty()) {
    rep.mean_error = sum / static_cast<double>(errs.size());
    rep.p50 = quantile(errs, 0.50);
    rep.p90 = quantile(errs, 0.90);
    rep.p99 = quantile(errs, 0.99);
  }

  rep.total_weight = omega.total_weight();
  rep.total_mass = static_cast<double>(p.total_mass());
  rep.weight_within_2eps =
      std::abs(rep.total_weight - rep.total_mass) <= 2.0 * params.epsilon * rep.total_mass;
  return rep;
}

WeightedCoreset uniform_baseline(const PointSet& p, std::int64_t size, std::uint64_t seed) {
  if (size < 1) fail(errc::invalid_argument, "size must be >= 1");
  std::vector<double> mass(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) mass[i] = static_cast<double>(p.multiplicity[i]);
  DiscreteSampler by_mass(mass);
  Rng rng(seed);
  std::vector<std::int64_t> draws(p.n(), 0);
  for (std::int64_t t = 0; t < size; ++t) ++draws[by_mass.draw(rng)];

  const double n_mass = static_cast<double>(p.total_mass());
  WeightedCoreset out;
  out.points = Matrix(0, p.dim());
  for (std::size_t i = 0; i < p.n(); ++i) {
    if (draws[i] == 0) continue;
    out.points.append_row(p.coords.row(i));
    out.weights.push_back(static_cast<double>(draws[i]) * n_mass / static_cast<double>(size));
    out.prov.push_back({Provenance::Kind::Sampled, GroupKey{}, -1});
  }
  return out;
}

}  // namespace coreset
