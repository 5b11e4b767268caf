#include "coreset/lb_instances.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "coreset/metric.hpp"
#include "coreset/parallel.hpp"
#include "coreset/rng.hpp"
#include "coreset/stats.hpp"

namespace coreset {

BasisInstance gen_basis_instance(int k, double eps, int z) {
  if (k < 2 || k % 2 != 0) fail(errc::invalid_argument, "k must be a positive even integer");
  if (!(eps > 0.0 && eps < 0.5)) fail(errc::invalid_argument, "eps must lie in (0, 1/2)");
  if (z < 1) fail(errc::invalid_argument, "z must be a positive integer");

  const double kmeans_q = 1.0 / (36.0 * eps * eps);
  if (kmeans_q < 2.0) fail(errc::eps_too_large, "eps too large for a Hadamard block (q < 2)");
  int q = 1;
  while (2.0 * q <= kmeans_q) q *= 2;

  BasisInstance inst;
  inst.k = k;
  inst.q = q;
  inst.d = k * q;
  const double half = 0.5 * z;
  inst.q_exact =
      z == 2 ? kmeans_q : 1.0 / (std::min(1.0, half * half) * 32.0 * 32.0 * eps * eps);
  inst.q_deviation = (q - inst.q_exact) / inst.q_exact;

  Matrix coords(inst.d, 2 * inst.d);
  for (int i = 0; i < inst.d; ++i) coords.at(i, i) = 1.0;
  inst.points = PointSet(std::move(coords));
  return inst;
}

std::vector<Solution> hadamard_solutions(const BasisInstance& inst) {
  const int q = inst.q, k = inst.k;
  if (q < 1 || std::popcount(static_cast<unsigned>(q)) != 1)
    fail(errc::invalid_argument, "q must be a power of two");
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));

  std::vector<Solution> out;
  out.reserve(q);
  for (int i = 0; i < q; ++i) {
    Matrix centers(k, 2 * static_cast<std::size_t>(inst.d));
    for (int j = 0; j < k; ++j)
      for (int c = 0; c < q; ++c) {
        // Sylvester entry H[i][c] = (-1)^popcount(i & c).
        const int sign = std::popcount(static_cast<unsigned>(i & c)) & 1 ? -1 : 1;
        centers.at(j, static_cast<std::size_t>(j) * q + c) = sign * scale;
      }
    out.emplace_back(std::move(centers));
  }
  return out;
}

double unit_center_bound(int d, int k, int z) {
  const double dd = d, dk = std::sqrt(static_cast<double>(d) * k);
  if (z == 2) return 2.0 * dd - 2.0 * dk;
  const double two_z2 = pow_int(std::sqrt(2.0), z);
  return two_z2 * dd - two_z2 * std::max(1.0, 0.5 * z) * dk;
}

namespace {

DiscreteInstance gen_edges(int copies, int n_clients, int n_centers, int z, std::uint64_t seed) {
  if (n_clients < 1 || n_centers < 1) fail(errc::invalid_argument, "sizes must be >= 1");
  if (z < 1) fail(errc::invalid_argument, "z must be a positive integer");
  DiscreteInstance inst;
  inst.copies = copies;
  inst.n_clients_per_copy = n_clients;
  inst.n_centers_per_copy = n_centers;
  inst.z = z;
  inst.seed = seed;
  const std::size_t edges =
      static_cast<std::size_t>(copies) * n_clients * static_cast<std::size_t>(n_centers);
  inst.bits.assign((edges + 63) / 64, 0);
  Rng rng(seed);
  for (std::size_t e = 0; e < edges; ++e)
    if (rng.bernoulli(inst.delta_p)) inst.bits[e >> 6] |= 1ULL << (e & 63);
  return inst;
}

}  // namespace

DiscreteInstance gen_subinstance(int n_clients, int n_centers, int z, std::uint64_t seed) {
  return gen_edges(1, n_clients, n_centers, z, seed);
}

DiscreteInstance gen_star_instance(int k, double eps, int n_clients_per_copy,
                                   int n_centers_per_copy, int z, std::uint64_t seed) {
  if (k < 1) fail(errc::invalid_argument, "k must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) fail(errc::invalid_argument, "eps must lie in (0, 1/2)");
  DiscreteInstance inst = gen_edges(k, n_clients_per_copy, n_centers_per_copy, z, seed);
  inst.star = true;
  inst.eps = eps;
  inst.d_inf = static_cast<double>(n_clients_per_copy) * k / eps;
  inst.regime_ok = static_cast<double>(n_centers_per_copy) >= std::pow(eps, -5.0) &&
                   n_centers_per_copy >= k;
  return inst;
}

int default_star_clients(double eps, int n_centers_per_copy) {
  return static_cast<int>(
      std::ceil(10.0 / (eps * eps) * std::log(static_cast<double>(n_centers_per_copy))));
}

double discrete_cost(const DiscreteInstance& inst, std::span<const CenterId> solution,
                     const WeightedClients* subset, double round_weights) {
  if (solution.empty()) fail(errc::invalid_argument, "solution must be nonempty");
  for (const CenterId& c : solution) {
    switch (c.kind) {
      case CenterId::Kind::Copy:
        if (c.copy < 0 || c.copy >= inst.copies || c.index < 0 ||
            c.index >= inst.n_centers_per_copy)
          fail(errc::unknown_center, "copy center out of range");
        break;
      case CenterId::Kind::C2:
        if (!inst.star || c.copy < 0 || c.copy >= inst.copies)
          fail(errc::unknown_center, "c2 center requires a star instance");
        break;
      case CenterId::Kind::CInf:
      case CenterId::Kind::C4Inf:
        if (!inst.star) fail(errc::unknown_center, "hub centers require a star instance");
        break;
    }
  }

  const double far = inst.star ? pow_int(8.0 * inst.d_inf, inst.z) : 0.0;
  const double hub = inst.star ? pow_int(inst.d_inf, inst.z) : 0.0;
  const double hub4 = inst.star ? pow_int(4.0 * inst.d_inf, inst.z) : 0.0;

  auto client_cost = [&](int copy, int local) {
    double best = std::numeric_limits<double>::infinity();
    for (const CenterId& c : solution) {
      double v;
      switch (c.kind) {
        case CenterId::Kind::Copy:
          v = c.copy == copy ? (inst.edge_short(copy, local, c.index) ? 1.0 : 2.0) : far;
          break;
        case CenterId::Kind::C2: v = c.copy == copy ? 2.0 : far; break;
        case CenterId::Kind::CInf: v = hub; break;
        case CenterId::Kind::C4Inf: v = hub4; break;
        default: v = far; break;
      }
      if (v < best) best = v;
    }
    return best;
  };

  double total = 0.0;
  if (subset == nullptr) {
    for (int copy = 0; copy < inst.copies; ++copy)
      for (int i = 0; i < inst.n_clients_per_copy; ++i) total += client_cost(copy, i);
    return total;
  }
  for (std::size_t s = 0; s < subset->ids.size(); ++s) {
    const int id = subset->ids[s];
    if (id < 0 || id >= inst.total_clients()) fail(errc::invalid_argument, "client id out of range");
    double w = subset->weights[s];
    if (round_weights > 0.0) w = std::round(w / round_weights) * round_weights;
    total += w * client_cost(id / inst.n_clients_per_copy, id % inst.n_clients_per_copy);
  }
  return total;
}

McEstimate anticoncentration_mc(int m, double p, double eps, std::span<const double> weights,
                                std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) fail(errc::invalid_argument, "trials must be >= 1");
  if (m < 1) fail(errc::invalid_argument, "m must be >= 1");
  if (!(p > 0.0 && p <= 0.25)) fail(errc::invalid_argument, "p must lie in (0, 1/4]");
  if (eps < 0.0) fail(errc::invalid_argument, "eps must be >= 0");

  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(m, 1.0);
  if (static_cast<int>(w.size()) != m) fail(errc::invalid_argument, "weights size must equal m");

  double sum_w = 0.0, max_w = 0.0;
  for (double v : w) {
    sum_w += v;
    max_w = std::max(max_w, v);
  }
  const double mu = p * sum_w;
  const double threshold = mu + eps * mu;

  constexpr std::int64_t kChunks = 128;
  std::vector<std::int64_t> hits(kChunks, 0);
  parallel_for(kChunks, [&](std::size_t chunk) {
    const std::int64_t lo = trials * static_cast<std::int64_t>(chunk) / kChunks;
    const std::int64_t hi = trials * (static_cast<std::int64_t>(chunk) + 1) / kChunks;
    Rng rng(substream_seed(seed, chunk));
    std::int64_t h = 0;
    for (std::int64_t t = lo; t < hi; ++t) {
      double s = 0.0;
      for (int i = 0; i < m; ++i)
        if (rng.uniform() < p) s += w[i];
      if (s > threshold) ++h;
    }
    hits[chunk] = h;
  });

  McEstimate out;
  out.trials = trials;
  for (auto h : hits) out.successes += h;
  out.estimate = static_cast<double>(out.successes) / static_cast<double>(trials);
  const WilsonInterval wi = wilson_interval(out.successes, trials);
  out.wilson_lo = wi.lo;
  out.wilson_hi = wi.hi;
  out.gamma = eps > 0.0 ? max_w * eps * static_cast<double>(m) / sum_w : 0.0;
  return out;
}

}  // namespace coreset
