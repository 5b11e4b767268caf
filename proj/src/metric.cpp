#include "coreset/metric.hpp"

#include <algorithm>
#include <numeric>

#include "coreset/error.hpp"

namespace coreset {

const char* errc_name(errc c) {
  switch (c) {
    case errc::dimension_mismatch: return "dimension mismatch";
    case errc::invalid_argument: return "invalid argument";
    case errc::k_exceeds_distinct: return "k exceeds distinct point count";
    case errc::eps_too_large: return "epsilon too large";
    case errc::group_zero_cost: return "group has zero cost";
    case errc::not_outer_group: return "not an outer group";
    case errc::zero_cost_denominator: return "cost(P,S) is zero";
    case errc::unknown_center: return "unknown center id";
    case errc::io_missing_file: return "missing file";
    case errc::io_malformed_header: return "malformed header";
    case errc::io_bad_value: return "bad value";
    case errc::io_negative_weight: return "negative weight";
    case errc::io_malformed_record: return "malformed record";
  }
  return "error";
}

double point_cost(std::span<const double> p, const Solution& s, int z) {
  require_same_dim(p.size(), s.dim(), "point and solution dimensions differ");
  return cost_from_sq(nearest_center(p.data(), s.centers).sq, z);
}

double total_cost(const PointSet& p, const Solution& s, int z) {
  require_same_dim(p.dim(), s.dim(), "point set and solution dimensions differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double c = cost_from_sq(nearest_center(p.coords.row(i), s.centers).sq, z);
    acc += static_cast<double>(p.multiplicity[i]) * c;
  }
  return acc;
}

double total_cost_weighted(const Matrix& pts, std::span<const double> weights, const Solution& s,
                           int z) {
  require_same_dim(pts.cols, s.dim(), "points and solution dimensions differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.rows; ++i)
    acc += weights[i] * cost_from_sq(nearest_center(pts.row(i), s.centers).sq, z);
  return acc;
}

Assignment assign(const PointSet& p, const Solution& s, int z) {
  require_same_dim(p.dim(), s.dim(), "point set and solution dimensions differ");
  Assignment out;
  out.center.resize(p.n());
  out.cost.resize(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    const Nearest n = nearest_center(p.coords.row(i), s.centers);
    out.center[i] = n.index;
    out.cost[i] = cost_from_sq(n.sq, z);
  }
  return out;
}

double power_triangle_bound(double a_cost, double c_cost, int z, double eps) {
  if (!(eps > 0.0)) fail(errc::invalid_argument, "power_triangle_bound requires eps > 0");
  return pow_int(1.0 + eps, z - 1) * a_cost + pow_int((1.0 + eps) / eps, z - 1) * c_cost;
}

std::size_t distinct_point_count(const Matrix& pts) {
  std::vector<std::size_t> order(pts.rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(pts.row(a), pts.row(a) + pts.cols, pts.row(b),
                                        pts.row(b) + pts.cols);
  };
  std::sort(order.begin(), order.end(), row_less);
  std::size_t distinct = pts.rows == 0 ? 0 : 1;
  for (std::size_t i = 1; i < pts.rows; ++i)
    if (row_less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

}  // namespace coreset
