#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "coreset/matrix.hpp"

namespace coreset {

/// The Euclidean hard instance: the standard basis e_1..e_d embedded in
/// R^(2d), with d = k*q and q a power of two.
struct BasisInstance {
  int d = 0;
  int k = 0;
  int q = 0;
  PointSet points;            // d rows in R^(2d)
  double q_exact = 0.0;      // the z-specific target value before the pow2 floor
  double q_deviation = 0.0;  // (q - q_exact) / q_exact
};

/// q = largest power of two <= 1/(36 eps^2); d = k*q; ambient dimension 2d.
/// The z-specific exact value (1/(min{1,(z/2)^2} 32^2 eps^2) for z != 2) is
/// reported through q_exact / q_deviation.
BasisInstance gen_basis_instance(int k, double eps, int z);

/// The q solutions built from the normalized Sylvester-Hadamard rows, row i
/// copied into each of the k coordinate blocks of size q.
std::vector<Solution> hadamard_solutions(const BasisInstance& inst);

/// Analytic lower bound for unit-norm k-center solutions on the basis
/// instance: 2d - 2 sqrt(dk) for z = 2, 2^(z/2)(d - max{1,z/2} sqrt(dk))
/// in general.
double unit_center_bound(int d, int k, int z);

/// Bipartite client/center instance with edge lengths 1 (probability 1/4) or
/// 2^(1/z), optionally star-composed over several copies with hub centers
/// c_inf (distance D_inf), c_4inf (4 D_inf) and per-copy c2_i (2^(1/z)).
/// Cross-copy client-center distance uses the surrogate 8 D_inf.
struct DiscreteInstance {
  int copies = 1;
  int n_clients_per_copy = 0;
  int n_centers_per_copy = 0;
  int z = 1;
  double delta_p = 0.25;
  bool star = false;
  double d_inf = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  bool regime_ok = true;  // asymptotic regime: |C| >= eps^-5 and k <= |C|
  std::vector<std::uint64_t> bits;  // packed short-edge flags

  int total_clients() const { return copies * n_clients_per_copy; }

  bool edge_short(int copy, int client, int center) const {
    const std::size_t e =
        (static_cast<std::size_t>(copy) * n_clients_per_copy + client) * n_centers_per_copy +
        center;
    return (bits[e >> 6] >> (e & 63)) & 1ULL;
  }

  /// Count of length-1 edges from a copy's clients to one of its centers.
  int n1_of_center(int copy, int center) const {
    int c = 0;
    for (int i = 0; i < n_clients_per_copy; ++i) c += edge_short(copy, i, center) ? 1 : 0;
    return c;
  }
};

struct CenterId {
  enum class Kind : std::uint8_t { Copy, CInf, C4Inf, C2 };
  Kind kind = Kind::Copy;
  int copy = 0;
  int index = 0;  // center index within the copy (Kind::Copy only)

  static CenterId of_copy(int copy, int index) { return {Kind::Copy, copy, index}; }
  static CenterId c_inf() { return {Kind::CInf, 0, 0}; }
  static CenterId c_4inf() { return {Kind::C4Inf, 0, 0}; }
  static CenterId c2(int copy) { return {Kind::C2, copy, 0}; }
};

DiscreteInstance gen_subinstance(int n_clients, int n_centers, int z, std::uint64_t seed);

/// k copies of the subinstance glued in a star; D_inf = n_clients * k / eps.
DiscreteInstance gen_star_instance(int k, double eps, int n_clients_per_copy,
                                   int n_centers_per_copy, int z, std::uint64_t seed);

/// Default client count per copy, ceil(10 eps^-2 ln |C|).
int default_star_clients(double eps, int n_centers_per_copy);

struct WeightedClients {
  std::vector<int> ids;  // global client ids (copy * n_U + local index)
  std::vector<double> weights;
};

/// Exact (k,z) cost of the clients (or of a weighted subset) against the
/// selected centers; powered edge costs are exact by construction
/// ((2^(1/z))^z stored as 2). round_weights > 0 rounds each weight to the
/// nearest multiple first (the eps/2-rounding used by the analysis).
double discrete_cost(const DiscreteInstance& inst, std::span<const CenterId> solution,
                     const WeightedClients* subset = nullptr, double round_weights = 0.0);

struct McEstimate {
  double estimate = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 1.0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double gamma = 0.0;  // fitted max w * eps * m / sum w (0 when eps = 0)
};

/// Monte Carlo estimate of Pr[sum w_i X_i - mu > eps * mu] for independent
/// Bernoulli(p) X_i, mu = p * sum w. Empty weights mean unit weights.
McEstimate anticoncentration_mc(int m, double p, double eps, std::span<const double> weights,
                                std::int64_t trials, std::uint64_t seed);

}  // namespace coreset
