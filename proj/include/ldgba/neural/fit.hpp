#pragma once

#include <cmath>
#include <span>

#include "ldgba/neural/qnet.hpp"

namespace ldgba::neural {

enum class OptimizerKind { Sgd, Adam };

/// Plain SGD, or Adam (beta1 0.9, beta2 0.999, eps 1e-8).
class Optimizer {
 public:
  explicit Optimizer(OptimizerKind kind = OptimizerKind::Sgd, double alpha = 1e-3) : kind_(kind), alpha_(alpha) {}

  OptimizerKind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  void step(QNet& net, QNet& grad) {
    auto params = net.parameters();
    auto grads = grad.parameters();
    if (kind_ == OptimizerKind::Sgd) {
      for (std::size_t k = 0; k < params.size(); ++k) {
        Vec& p = *params[k].values;
        const Vec& g = *grads[k].values;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= alpha_ * g[i];
      }
      return;
    }
    if (m_.empty()) {
      for (auto& p : params) {
        m_.emplace_back(p.values->size(), 0.0);
        v_.emplace_back(p.values->size(), 0.0);
      }
    }
    ++t_;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_)), c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params.size(); ++k) {
      Vec& p = *params[k].values;
      const Vec& g = *grads[k].values;
      Vec& m = m_[k];
      Vec& v = v_[k];
      for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = b1 * m[i] + (1 - b1) * g[i];
        v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
        p[i] -= alpha_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
      }
    }
  }

 private:
  OptimizerKind kind_;
  double alpha_;
  std::uint64_t t_ = 0;
  std::vector<Vec> m_, v_;
};

struct FitSample {
  Sequence obs, task;
  std::uint32_t action = 0;
  double target = 0.0;
};

/// Gradient of mean_b (target_b - Q(x_b)[a_b])^2 accumulated into grad
/// (which is cleared first); returns the loss.
inline double mse_gradient(const QNet& net, std::span<const FitSample> batch, QNet& grad) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  grad.set_zero();
  QNetCache cache;
  Vec dq(net.shape().actions, 0.0);
  double loss = 0.0;
  const double n = static_cast<double>(batch.size());
  for (const auto& s : batch) {
    if (s.action >= net.shape().actions) throw ShapeError("action index outside the network head");
    const Vec q = net.forward(s.obs, s.task, &cache);
    const double err = q[s.action] - s.target;
    loss += err * err / n;
    std::fill(dq.begin(), dq.end(), 0.0);
    dq[s.action] = 2.0 * err / n;
    net.backward(s.obs, s.task, cache, dq, grad);
  }
  return loss;
}

/// One optimizer step on the batch; returns the loss before the step.
inline double mse_fit(QNet& net, std::span<const FitSample> batch, Optimizer& opt, QNet& scratch_grad) {
  const double loss = mse_gradient(net, batch, scratch_grad);
  opt.step(net, scratch_grad);
  return loss;
}

inline double mse_fit(QNet& net, std::span<const FitSample> batch, Optimizer& opt) {
  QNet grad = net.zeros_like();
  return mse_fit(net, batch, opt, grad);
}

}  // namespace ldgba::neural
