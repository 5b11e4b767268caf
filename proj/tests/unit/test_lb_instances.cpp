#include "doctest.h"

#include <cmath>
#include <set>

#include "coreset/lb_instances.hpp"
#include "coreset/metric.hpp"
#include "coreset/rng.hpp"

using namespace coreset;

namespace {

// Independent oracle: plain nearest-center assignment over all points.
double brute_cost(const PointSet& p, const Solution& s, int z) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s.k(); ++j) {
      double sq = 0.0;
      for (std::size_t c = 0; c < p.dim(); ++c) {
        const double t = p.coords.at(i, c) - s.centers.at(j, c);
        sq += t * t;
      }
      best = std::min(best, sq);
    }
    total += static_cast<double>(p.multiplicity[i]) * std::pow(std::sqrt(best), z);
  }
  return total;
}

}  // namespace

TEST_CASE("gen_basis_instance geometry and rejection") {
  CHECK_THROWS_AS(gen_basis_instance(2, 1.0 / 6.0, 2), error);  // q = 1 < 2

  const BasisInstance inst = gen_basis_instance(2, 1.0 / 12.0, 2);
  CHECK(inst.q == 4);
  CHECK(inst.d == 8);
  CHECK(inst.points.n() == 8);
  CHECK(inst.points.dim() == 16);
  CHECK(inst.q_exact == doctest::Approx(4.0));

  // Unit norms, orthogonality, pairwise squared distance 2 (exact).
  for (std::size_t i = 0; i < inst.points.n(); ++i) {
    double sq = 0.0;
    for (std::size_t c = 0; c < inst.points.dim(); ++c)
      sq += inst.points.coords.at(i, c) * inst.points.coords.at(i, c);
    CHECK(sq == 1.0);
    for (std::size_t j = i + 1; j < inst.points.n(); ++j) {
      double dot = 0.0, dist_sq = 0.0;
      for (std::size_t c = 0; c < inst.points.dim(); ++c) {
        dot += inst.points.coords.at(i, c) * inst.points.coords.at(j, c);
        const double t = inst.points.coords.at(i, c) - inst.points.coords.at(j, c);
        dist_sq += t * t;
      }
      CHECK(dot == 0.0);
      CHECK(dist_sq == 2.0);
    }
  }

  // The general-z target value is reported with its deviation.
  const BasisInstance z3 = gen_basis_instance(2, 1.0 / 12.0, 3);
  CHECK(z3.q == 4);
  CHECK(z3.q_exact == doctest::Approx(144.0 / 1024.0));
  CHECK(z3.q_deviation > 0.0);
}

TEST_CASE("hadamard base case q=2") {
  BasisInstance inst;
  inst.k = 2;
  inst.q = 2;
  inst.d = 4;
  const auto sols = hadamard_solutions(inst);
  REQUIRE(sols.size() == 2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(sols[0].centers.at(0, 0) == doctest::Approx(r));
  CHECK(sols[0].centers.at(0, 1) == doctest::Approx(r));
  CHECK(sols[1].centers.at(0, 0) == doctest::Approx(r));
  CHECK(sols[1].centers.at(0, 1) == doctest::Approx(-r));
  // Center j occupies block j.
  CHECK(sols[0].centers.at(1, 2) == doctest::Approx(r));
  CHECK(sols[0].centers.at(0, 2) == 0.0);
}

TEST_CASE("hadamard solution costs match the analytic forms (z=2)") {
  for (int k : {2, 4}) {
    for (double eps : {1.0 / 12.0, 1.0 / 24.0}) {
      const BasisInstance inst = gen_basis_instance(k, eps, 2);
      const auto sols = hadamard_solutions(inst);
      REQUIRE(static_cast<int>(sols.size()) == inst.q);
      const double d = inst.d, q = inst.q;
      for (std::size_t i = 0; i < sols.size(); ++i) {
        const double expect = i == 0 ? 2.0 * d - 2.0 * d / std::sqrt(q)
                                     : 2.0 * d - d / std::sqrt(q);
        const double cost = brute_cost(inst.points, sols[i], 2);
        CHECK(cost == doctest::Approx(expect).epsilon(1e-9));
        CHECK(total_cost(inst.points, sols[i], 2) == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
  // The worked example: k=2, q=4, d=8.
  const BasisInstance inst = gen_basis_instance(2, 1.0 / 12.0, 2);
  const auto sols = hadamard_solutions(inst);
  CHECK(brute_cost(inst.points, sols[1], 2) == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(brute_cost(inst.points, sols[0], 2) == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("hadamard orthogonality structure") {
  const BasisInstance inst = gen_basis_instance(4, 1.0 / 24.0, 2);  // k=4, q=16
  const auto sols = hadamard_solutions(inst);

  // Within one solution: disjoint supports.
  for (const Solution& s : sols)
    for (std::size_t a = 0; a < s.k(); ++a)
      for (std::size_t b = a + 1; b < s.k(); ++b) {
        double dot = 0.0;
        for (std::size_t c = 0; c < s.dim(); ++c)
          dot += s.centers.at(a, c) * s.centers.at(b, c);
        CHECK(dot == 0.0);
      }

  // Across solutions: the q centers a fixed e_h is assigned to are pairwise
  // orthogonal (same block, distinct Hadamard rows).
  for (std::size_t h = 0; h < inst.points.n(); h += 7) {
    std::vector<std::vector<double>> assigned;
    for (const Solution& s : sols) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t j = 0; j < s.k(); ++j) {
        const double sq =
            squared_distance(inst.points.coords.row(h), s.centers.row(j), s.dim());
        if (sq < best) {
          best = sq;
          arg = j;
        }
      }
      assigned.emplace_back(s.centers.row(arg), s.centers.row(arg) + s.dim());
    }
    for (std::size_t a = 0; a < assigned.size(); ++a)
      for (std::size_t b = a + 1; b < assigned.size(); ++b) {
        double dot = 0.0;
        for (std::size_t c = 0; c < assigned[a].size(); ++c)
          dot += assigned[a][c] * assigned[b][c];
        CHECK(dot == 0.0);
      }
  }
}

TEST_CASE("unit_center_bound values and domination") {
  CHECK(unit_center_bound(8, 2, 2) == doctest::Approx(8.0));
  CHECK(unit_center_bound(8, 8, 2) == doctest::Approx(0.0));
  const double b3 = unit_center_bound(8, 2, 3);
  CHECK(b3 == doctest::Approx(pow_int(std::sqrt(2.0), 3) * (8.0 - 1.5 * 4.0)));

  const BasisInstance inst = gen_basis_instance(2, 1.0 / 12.0, 2);
  const auto sols = hadamard_solutions(inst);
  const double bound = unit_center_bound(inst.d, inst.k, 2);
  for (const Solution& s : sols)
    CHECK(total_cost(inst.points, s, 2) >= bound - 1e-9);

  // Random unit-norm solutions also respect the bound.
  Rng rng(55);
  for (int t = 0; t < 100; ++t) {
    Matrix centers(inst.k, inst.points.dim());
    for (int j = 0; j < inst.k; ++j) {
      double norm_sq = 0.0;
      for (std::size_t c = 0; c < inst.points.dim(); ++c) {
        centers.at(j, c) = rng.normal();
        norm_sq += centers.at(j, c) * centers.at(j, c);
      }
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (std::size_t c = 0; c < inst.points.dim(); ++c) centers.at(j, c) *= inv;
    }
    CHECK(total_cost(inst.points, Solution(centers), 2) >= bound - 1e-9);
  }
}

TEST_CASE("gen_subinstance edge statistics and cost identity") {
  const DiscreteInstance big = gen_subinstance(1000, 1000, 2, 42);
  std::int64_t short_edges = 0;
  for (int i = 0; i < 1000; ++i)
    for (int c = 0; c < 1000; ++c) short_edges += big.edge_short(0, i, c) ? 1 : 0;
  const double frac = static_cast<double>(short_edges) / 1e6;
  CHECK(frac == doctest::Approx(0.25).epsilon(0.01));
  CHECK(std::abs(frac - 0.25) <= 0.002);

  // cost(c) = 2|P| - n_1(c), exact, on random instances.
  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const DiscreteInstance inst = gen_subinstance(10, 32, 1 + (t % 4), rng.next_u64());
    for (int c = 0; c < 32; c += 5) {
      const CenterId id = CenterId::of_copy(0, c);
      const double cost = discrete_cost(inst, {&id, 1});
      CHECK(cost == 2.0 * 10 - inst.n1_of_center(0, c));
    }
  }

  // A center with n_1 = 3 on a 10-client instance costs 17.
  bool found = false;
  const DiscreteInstance inst = gen_subinstance(10, 64, 2, 7);
  for (int c = 0; c < 64 && !found; ++c)
    if (inst.n1_of_center(0, c) == 3) {
      const CenterId id = CenterId::of_copy(0, c);
      CHECK(discrete_cost(inst, {&id, 1}) == 17.0);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("gen_star_instance special-solution costs are exact") {
  const int k = 2, n_u = 8, centers = 16;
  const double eps = 0.25;
  for (int z : {1, 2, 3}) {
    const DiscreteInstance star = gen_star_instance(k, eps, n_u, centers, z, 5);
    CHECK(star.d_inf == doctest::Approx(n_u * k / eps));

    std::vector<CenterId> s2;
    for (int i = 0; i < k; ++i) s2.push_back(CenterId::c2(i));
    CHECK(discrete_cost(star, s2) == 2.0 * k * n_u);

    const CenterId cinf = CenterId::c_inf();
    CHECK(discrete_cost(star, {&cinf, 1}) == k * n_u * pow_int(star.d_inf, z));

    const CenterId c4 = CenterId::c_4inf();
    CHECK(discrete_cost(star, {&c4, 1}) == k * n_u * pow_int(4.0 * star.d_inf, z));

    // Oracle for c_4inf at k=2, n_U=8: every client pays (4 D)^z.
    double oracle = 0.0;
    for (int i = 0; i < k * n_u; ++i) oracle += pow_int(4.0 * star.d_inf, z);
    CHECK(discrete_cost(star, {&c4, 1}) == oracle);

    // Covering solution: one copy-center each; cost = 2 k n_U - n_1(S).
    std::vector<CenterId> covering;
    int n1 = 0;
    for (int i = 0; i < k; ++i) {
      covering.push_back(CenterId::of_copy(i, 3));
      n1 += star.n1_of_center(i, 3);
    }
    CHECK(discrete_cost(star, covering) == 2.0 * k * n_u - n1);
  }
}

TEST_CASE("discrete_cost subsets, rounding, and errors") {
  const DiscreteInstance star = gen_star_instance(2, 0.25, 8, 8, 2, 11);
  const CenterId id = CenterId::of_copy(0, 1);

  // All clients with unit weights equals the full cost.
  WeightedClients all;
  for (int i = 0; i < star.total_clients(); ++i) {
    all.ids.push_back(i);
    all.weights.push_back(1.0);
  }
  CHECK(discrete_cost(star, {&id, 1}, &all) == discrete_cost(star, {&id, 1}));

  // eps/2 rounding of weights.
  WeightedClients one;
  one.ids = {0};
  one.weights = {1.06};
  const double rounded = discrete_cost(star, {&id, 1}, &one, 0.125);
  const double direct_cost = discrete_cost(star, {&id, 1}, &one) / 1.06;
  CHECK(rounded == doctest::Approx(direct_cost * std::round(1.06 / 0.125) * 0.125));

  const CenterId bad = CenterId::of_copy(5, 0);
  CHECK_THROWS_AS(discrete_cost(star, {&bad, 1}), error);
  const DiscreteInstance flat = gen_subinstance(4, 4, 2, 1);
  const CenterId hub = CenterId::c_inf();
  CHECK_THROWS_AS(discrete_cost(flat, {&hub, 1}), error);
}

TEST_CASE("anticoncentration_mc sanity and determinism") {
  const McEstimate a = anticoncentration_mc(100, 0.25, 0.2, {}, 100000, 3);
  const McEstimate b = anticoncentration_mc(100, 0.25, 0.2, {}, 100000, 3);
  CHECK(a.successes == b.successes);
  CHECK(a.estimate > 0.0);
  CHECK(a.wilson_lo <= a.estimate);
  CHECK(a.wilson_hi >= a.estimate);

  // Exponential-rate fit: Pr >= exp(-c eps^2 m p) with c <= 10.
  const double c =
      -std::log(a.estimate) / (0.2 * 0.2 * 100 * 0.25);
  CHECK(c <= 10.0);

  // eps = 0 boundary: probability of exceeding the mean at all.
  const McEstimate zero = anticoncentration_mc(100, 0.25, 0.0, {}, 50000, 5);
  CHECK(zero.estimate > 0.2);
  CHECK(zero.estimate < 0.6);

  CHECK_THROWS_AS(anticoncentration_mc(100, 0.5, 0.2, {}, 100, 1), error);
  CHECK_THROWS_AS(anticoncentration_mc(100, 0.25, 0.2, {}, 0, 1), error);
}
