#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/pomdp/rng.hpp"

namespace ldgba::neural {

using Vec = std::vector<double>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  Vec v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  const double* row(std::size_t r) const { return v.data() + r * cols; }
  double* row(std::size_t r) { return v.data() + r * cols; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Sequence of one-hot vectors over a vocabulary of `width` items. An item
/// of -1 stands for the all-zero vector.
struct Sequence {
  std::size_t width = 0;
  std::vector<std::int32_t> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

inline void check_sequence(const Sequence& s, std::size_t width, const char* what) {
  if (s.width != width)
    throw ShapeError(std::string(what) + ": sequence width " + std::to_string(s.width) + " != " + std::to_string(width));
  for (auto i : s.items)
    if (i < -1 || i >= static_cast<std::int32_t>(width))
      throw ShapeError(std::string(what) + ": item " + std::to_string(i) + " outside vocabulary");
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Fills with U(-1/sqrt(fan_in), +1/sqrt(fan_in)) from the weight stream.
inline void init_uniform(Vec& v, std::size_t fan_in, pomdp::Rng& rng) {
  const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (double& x : v) x = (2.0 * rng.uniform(pomdp::Stream::Weights) - 1.0) * r;
}

/// y += M x
inline void gemv_add(const Matrix& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* w = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += w[c] * x[c];
    y[r] += acc;
  }
}

/// y += M^T x
inline void gemv_t_add(const Matrix& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* w = m.row(r);
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += w[c] * xr;
  }
}

/// M += x y^T
inline void outer_add(Matrix& m, const double* x, const double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double* w = m.row(r);
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t c = 0; c < m.cols; ++c) w[c] += xr * y[c];
  }
}

}  // namespace ldgba::neural
