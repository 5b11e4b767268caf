#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "coreset/error.hpp"

namespace coreset {

/// Dense row-major matrix of doubles. Rows are points, columns coordinates.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // rows*cols, row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  void append_row(const double* p) {
    data.insert(data.end(), p, p + cols);
    ++rows;
  }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const Matrix&) const = default;
};

/// The instance P: points with positive integer multiplicities.
struct PointSet {
  Matrix coords;
  std::vector<std::int64_t> multiplicity;  // one per row, all >= 1

  PointSet() = default;
  explicit PointSet(Matrix m) : coords(std::move(m)), multiplicity(coords.rows, 1) {}
  PointSet(Matrix m, std::vector<std::int64_t> mult)
      : coords(std::move(m)), multiplicity(std::move(mult)) {}

  std::size_t n() const { return coords.rows; }
  std::size_t dim() const { return coords.cols; }

  std::int64_t total_mass() const {
    std::int64_t t = 0;
    for (auto m : multiplicity) t += m;
    return t;
  }

  void validate() const {
    if (coords.rows == 0 || coords.cols == 0)
      fail(errc::invalid_argument, "point set must have n >= 1 and d >= 1");
    if (!coords.all_finite()) fail(errc::io_bad_value, "non-finite coordinate in point set");
    if (multiplicity.size() != coords.rows)
      fail(errc::invalid_argument, "multiplicity size does not match point count");
    for (auto m : multiplicity)
      if (m < 1) fail(errc::invalid_argument, "multiplicities must be >= 1");
  }
};

/// Points with arbitrary nonnegative real weights, as they arrive from disk
/// or a generator; preprocessing turns them into a PointSet.
struct RawPoints {
  Matrix coords;
  std::vector<double> weights;  // empty means all 1

  std::size_t n() const { return coords.rows; }
  std::size_t dim() const { return coords.cols; }

  static RawPoints from_point_set(const PointSet& p) {
    RawPoints raw;
    raw.coords = p.coords;
    raw.weights.resize(p.n());
    for (std::size_t i = 0; i < p.n(); ++i)
      raw.weights[i] = static_cast<double>(p.multiplicity[i]);
    return raw;
  }
};

/// A candidate solution: k centers.
struct Solution {
  Matrix centers;

  Solution() = default;
  explicit Solution(Matrix c) : centers(std::move(c)) {}

  std::size_t k() const { return centers.rows; }
  std::size_t dim() const { return centers.cols; }
};

/// The (z, epsilon) pair shared by the whole pipeline.
struct PowerParams {
  int z = 2;
  double epsilon = 0.1;

  void validate() const {
    if (z < 1) fail(errc::invalid_argument, "z must be a positive integer");
    if (!(epsilon > 0.0 && epsilon < 0.5))
      fail(errc::invalid_argument, "epsilon must lie in (0, 1/2)");
  }
};

using CostVector = std::vector<double>;

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) fail(errc::dimension_mismatch, what);
}

}  // namespace coreset
