#pragma once

#include <span>

#include "coreset/matrix.hpp"

namespace coreset {

/// x^e for integer e >= 0 by repeated squaring; deterministic, no libm.
inline double pow_int(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

/// dist^z from a squared distance: (sq)^(z/2) for even z, sqrt-then-power
/// otherwise.
inline double cost_from_sq(double sq, int z) {
  if (z == 2) return sq;
  if ((z & 1) == 0) return pow_int(sq, z / 2);
  return pow_int(std::sqrt(sq), z);
}

inline double squared_distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

struct Nearest {
  double sq = 0.0;  // squared distance to the winning center
  int index = 0;    // lowest index on ties
};

inline Nearest nearest_center(const double* p, const Matrix& centers) {
  Nearest best{squared_distance(p, centers.row(0), centers.cols), 0};
  for (std::size_t j = 1; j < centers.rows; ++j) {
    const double sq = squared_distance(p, centers.row(j), centers.cols);
    if (sq < best.sq) best = {sq, static_cast<int>(j)};
  }
  return best;
}

/// cost(p, S) = min over centers of the Euclidean distance to the z-th power.
double point_cost(std::span<const double> p, const Solution& s, int z);

/// cost(P, S) = sum over points of multiplicity * point cost, accumulated in
/// point order.
double total_cost(const PointSet& p, const Solution& s, int z);

/// Same, for real-weighted rows (used for coreset-side evaluation).
double total_cost_weighted(const Matrix& pts, std::span<const double> weights, const Solution& s,
                           int z);

struct Assignment {
  std::vector<int> center;  // per point, argmin index (lowest on ties)
  CostVector cost;          // per point, multiplicity-free cost
};

Assignment assign(const PointSet& p, const Solution& s, int z);

/// Upper bound on d(a,b)^z given a_cost = d(a,c)^z and c_cost = d(b,c)^z:
/// (1+eps)^(z-1) * a_cost + ((1+eps)/eps)^(z-1) * c_cost.
double power_triangle_bound(double a_cost, double c_cost, int z, double eps);

/// Number of distinct coordinate rows.
std::size_t distinct_point_count(const Matrix& pts);

}  // namespace coreset
