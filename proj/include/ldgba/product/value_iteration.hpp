#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ldgba/product/explicit.hpp"

namespace ldgba::product {

struct QTable {
  std::size_t actions = 0;
  std::vector<double> q;   // [state * actions + action]; NaN where unavailable
  double residual = 0.0;   // sup-norm Bellman residual of the returned table
  std::size_t iterations = 0;
  bool converged = false;

  double at(std::uint32_t x, std::uint32_t a) const { return q.at(x * actions + a); }
  bool available(std::uint32_t x, std::uint32_t a) const { return !std::isnan(at(x, a)); }

  /// Best action among the first `limit` actions, lowest index on ties.
  std::uint32_t greedy(std::uint32_t x, std::uint32_t limit = std::numeric_limits<std::uint32_t>::max()) const {
    std::uint32_t best = 0;
    double v = -std::numeric_limits<double>::infinity();
    for (std::uint32_t a = 0; a < std::min<std::size_t>(actions, limit); ++a)
      if (available(x, a) && at(x, a) > v) {
        v = at(x, a);
        best = a;
      }
    return best;
  }

  double value(std::uint32_t x, std::uint32_t limit = std::numeric_limits<std::uint32_t>::max()) const {
    double v = -std::numeric_limits<double>::infinity();
    for (std::uint32_t a = 0; a < std::min<std::size_t>(actions, limit); ++a)
      if (available(x, a)) v = std::max(v, at(x, a));
    return v;
  }
};

/// Synchronous value iteration on Q until the sup-norm Bellman residual drops
/// below tol, or max_iterations sweeps (converged = false).
inline QTable value_iteration(const ExplicitMdp& e, double gamma, double tol = 1e-10,
                              std::size_t max_iterations = 200000) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  QTable t;
  t.actions = e.actions;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.q.assign(e.size() * e.actions, nan);
  for (std::uint32_t x = 0; x < e.size(); ++x)
    for (std::uint32_t a = 0; a < e.actions; ++a)
      if (e.available(x, a)) t.q[x * e.actions + a] = 0.0;

  std::vector<double> v(e.size(), 0.0), next(t.q.size());
  auto sweep = [&](std::vector<double>& dst) {
    double res = 0;
    for (std::uint32_t x = 0; x < e.size(); ++x)
      for (std::uint32_t a = 0; a < e.actions; ++a) {
        const auto& row = e.row(x, a);
        if (row.empty()) {
          dst[x * e.actions + a] = nan;
          continue;
        }
        double acc = 0;
        for (const auto& edge : row) acc += edge.prob * (edge.reward + gamma * v[edge.to]);
        dst[x * e.actions + a] = acc;
        res = std::max(res, std::abs(acc - t.q[x * e.actions + a]));
      }
    return res;
  };
  auto refresh_values = [&] {
    for (std::uint32_t x = 0; x < e.size(); ++x) v[x] = t.value(x);
  };

  refresh_values();
  for (t.iterations = 0; t.iterations < max_iterations; ++t.iterations) {
    t.residual = sweep(next);
    t.q.swap(next);
    refresh_values();
    if (t.residual < tol) {
      t.converged = true;
      break;
    }
  }
  // residual of the table actually returned
  t.residual = sweep(next);
  t.converged = t.residual < tol;
  return t;
}

}  // namespace ldgba::product
