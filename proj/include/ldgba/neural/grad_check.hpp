#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ldgba/neural/qnet.hpp"

namespace ldgba::neural {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0, numeric = 0.0;
  std::size_t checked = 0;
  bool pass = false;
};

/// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
/// gradient is ~0 from turning finite-difference noise into a huge ratio.
inline double relative_error(double a, double n, double floor = 1e-6) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

/// Compares backward() with central differences (step h) of the scalar
/// loss sum_k w_k Q_k(obs, task). `tamper` may alter the analytic gradient
/// before comparison, for fault-injection tests.
inline GradCheckReport grad_check(QNet net, const Sequence& obs, const Sequence& task, const Vec& w, double tol,
                                  double h = 1e-5, const std::function<void(QNet&)>& tamper = {}) {
  QNet grad = net.zeros_like();
  QNetCache cache;
  net.forward(obs, task, &cache);
  net.backward(obs, task, cache, w, grad);
  if (tamper) tamper(grad);
  auto loss = [&] {
    const Vec q = net.forward(obs, task);
    double l = 0;
    for (std::size_t k = 0; k < q.size(); ++k) l += w[k] * q[k];
    return l;
  };
  GradCheckReport r;
  auto params = net.parameters();
  auto grads = grad.parameters();
  for (std::size_t k = 0; k < params.size(); ++k) {
    Vec& p = *params[k].values;
    const Vec& g = *grads[k].values;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double keep = p[i];
      p[i] = keep + h;
      const double up = loss();
      p[i] = keep - h;
      const double down = loss();
      p[i] = keep;
      const double numeric = (up - down) / (2 * h);
      const double e = relative_error(g[i], numeric);
      ++r.checked;
      if (e > r.max_rel_error || r.worst_param.empty()) {
        r.max_rel_error = e;
        r.worst_param = params[k].name;
        r.worst_index = i;
        r.analytic = g[i];
        r.numeric = numeric;
      }
    }
  }
  r.pass = r.max_rel_error < tol;
  return r;
}

struct GradCheckCase {
  QNet net;
  Sequence obs, task;
  Vec weights;
};

/// Seeded small configuration: hidden sizes 1..16, sequences of length
/// 1..6, random parameters including biases, random output weighting.
inline GradCheckCase random_grad_case(std::uint64_t seed, Architecture arch = Architecture::TwinLstm) {
  pomdp::Rng rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng.index(pomdp::Stream::Init, hi - lo + 1); };
  QNetShape s;
  s.arch = arch;
  s.obs_vocab = pick(2, 8);
  s.task_vocab = pick(2, 5);
  s.obs_hidden = pick(1, 16);
  s.task_hidden = pick(1, 16);
  s.actions = pick(2, 5);
  s.width = pick(2, 16);
  s.obs_len = pick(1, 6);
  s.task_len = pick(1, 6);
  GradCheckCase c{QNet::random(s, rng), {s.obs_vocab, {}}, {s.task_vocab, {}}, {}};
  for (auto& p : c.net.parameters())
    for (double& x : *p.values) x += 0.3 * (2 * rng.uniform(pomdp::Stream::Init) - 1);
  for (std::size_t t = 0; t < s.obs_len; ++t) c.obs.items.push_back(static_cast<std::int32_t>(rng.index(pomdp::Stream::Init, s.obs_vocab)));
  for (std::size_t t = 0; t < s.task_len; ++t)
    c.task.items.push_back(static_cast<std::int32_t>(rng.index(pomdp::Stream::Init, s.task_vocab)));
  for (std::size_t k = 0; k < s.actions; ++k) c.weights.push_back(2 * rng.uniform(pomdp::Stream::Init) - 1);
  return c;
}

}  // namespace ldgba::neural
