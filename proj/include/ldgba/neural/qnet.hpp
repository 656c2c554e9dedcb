#pragma once

#include <span>
#include <string>
#include <utility>

#include "ldgba/neural/lstm.hpp"

namespace ldgba::neural {

enum class Architecture : std::uint32_t { TwinLstm = 1, Dense = 2 };

struct QNetShape {
  Architecture arch = Architecture::TwinLstm;
  std::size_t obs_vocab = 1, task_vocab = 1;
  std::size_t obs_hidden = 32, task_hidden = 16;
  std::size_t actions = 4;
  std::size_t width = 16;  // both fully connected layers
  // The dense baseline flattens fixed-length windows.
  std::size_t obs_len = 1, task_len = 1;

  std::size_t dense_input() const {
    return arch == Architecture::TwinLstm ? obs_hidden + task_hidden : obs_len * obs_vocab + task_len * task_vocab;
  }
  friend bool operator==(const QNetShape&, const QNetShape&) = default;
};

struct Linear {
  Matrix W;  // out x in
  Vec b;
  Linear() = default;
  Linear(std::size_t in, std::size_t out) : W(out, in), b(out, 0.0) {}
  friend bool operator==(const Linear&, const Linear&) = default;
};

struct QNetCache {
  bool valid = false;
  LstmCache obs, task;
  Vec z0;              // concatenated hidden states (twin LSTM only)
  std::vector<std::size_t> active;  // hot input columns (dense baseline only)
  Vec a1, a2;          // post-ReLU activations
  Vec out;
};

struct ParamRef {
  std::string name;
  Vec* values;
};

/// Two LSTMs (observation history, task history) feeding two ReLU layers
/// and a linear head with one output per environment action; or, for the
/// baseline, the flattened one-hot windows feeding the same stack.
class QNet {
 public:
  QNet() = default;
  explicit QNet(const QNetShape& s)
      : shape_(s),
        d1_(s.dense_input(), s.width),
        d2_(s.width, s.width),
        head_(s.width, s.actions) {
    if (s.actions == 0 || s.width == 0 || s.obs_vocab == 0 || s.task_vocab == 0)
      throw ShapeError("network dimensions must be positive");
    if (s.arch == Architecture::TwinLstm) {
      if (s.obs_hidden == 0 || s.task_hidden == 0) throw ShapeError("hidden sizes must be positive");
      obs_ = Lstm(s.obs_vocab, s.obs_hidden);
      task_ = Lstm(s.task_vocab, s.task_hidden);
    } else if (s.obs_len == 0 || s.task_len == 0) {
      throw ShapeError("window lengths must be positive");
    }
  }

  static QNet random(const QNetShape& s, pomdp::Rng& rng) {
    QNet n(s);
    n.init(rng);
    return n;
  }

  void init(pomdp::Rng& rng) {
    if (shape_.arch == Architecture::TwinLstm) {
      obs_.init(rng);
      task_.init(rng);
    }
    init_uniform(d1_.W.v, shape_.dense_input(), rng);
    init_uniform(d2_.W.v, shape_.width, rng);
    init_uniform(head_.W.v, shape_.width, rng);
    for (Linear* l : {&d1_, &d2_, &head_}) std::fill(l->b.begin(), l->b.end(), 0.0);
  }

  const QNetShape& shape() const { return shape_; }

  /// Same shape, all parameters zero (gradient accumulator).
  QNet zeros_like() const { return QNet(shape_); }

  std::vector<ParamRef> parameters() {
    std::vector<ParamRef> out;
    if (shape_.arch == Architecture::TwinLstm) {
      out.push_back({"obs_lstm.W", &obs_.W.v});
      out.push_back({"obs_lstm.U", &obs_.U.v});
      out.push_back({"obs_lstm.b", &obs_.b});
      out.push_back({"task_lstm.W", &task_.W.v});
      out.push_back({"task_lstm.U", &task_.U.v});
      out.push_back({"task_lstm.b", &task_.b});
    }
    out.push_back({"dense1.W", &d1_.W.v});
    out.push_back({"dense1.b", &d1_.b});
    out.push_back({"dense2.W", &d2_.W.v});
    out.push_back({"dense2.b", &d2_.b});
    out.push_back({"head.W", &head_.W.v});
    out.push_back({"head.b", &head_.b});
    return out;
  }

  std::size_t parameter_count() {
    std::size_t n = 0;
    for (auto& p : parameters()) n += p.values->size();
    return n;
  }

  void set_zero() {
    for (auto& p : parameters()) std::fill(p.values->begin(), p.values->end(), 0.0);
  }

  Vec forward(const Sequence& obs, const Sequence& task, QNetCache* cache = nullptr) const {
    QNetCache local;
    QNetCache& k = cache ? *cache : local;
    k.valid = false;
    const std::size_t W = shape_.width;
    k.a1.assign(d1_.b.begin(), d1_.b.end());
    if (shape_.arch == Architecture::TwinLstm) {
      if (obs.empty() || task.empty()) throw ShapeError("sequences must be non-empty");
      const Vec ho = lstm_forward(obs_, obs, &k.obs);
      const Vec ht = lstm_forward(task_, task, &k.task);
      k.z0 = ho;
      k.z0.insert(k.z0.end(), ht.begin(), ht.end());
      gemv_add(d1_.W, k.z0.data(), k.a1.data());
    } else {
      check_sequence(obs, shape_.obs_vocab, "observation window");
      check_sequence(task, shape_.task_vocab, "task window");
      if (obs.size() != shape_.obs_len || task.size() != shape_.task_len)
        throw ShapeError("dense baseline expects windows of length " + std::to_string(shape_.obs_len) + " and " +
                         std::to_string(shape_.task_len));
      k.active.clear();
      for (std::size_t t = 0; t < obs.size(); ++t)
        if (obs.items[t] >= 0) k.active.push_back(t * shape_.obs_vocab + static_cast<std::size_t>(obs.items[t]));
      const std::size_t base = shape_.obs_len * shape_.obs_vocab;
      for (std::size_t t = 0; t < task.size(); ++t)
        if (task.items[t] >= 0)
          k.active.push_back(base + t * shape_.task_vocab + static_cast<std::size_t>(task.items[t]));
      for (std::size_t r = 0; r < W; ++r) {
        const double* w = d1_.W.row(r);
        for (std::size_t c : k.active) k.a1[r] += w[c];
      }
    }
    for (double& x : k.a1) x = std::max(0.0, x);
    k.a2.assign(d2_.b.begin(), d2_.b.end());
    gemv_add(d2_.W, k.a1.data(), k.a2.data());
    for (double& x : k.a2) x = std::max(0.0, x);
    k.out.assign(head_.b.begin(), head_.b.end());
    gemv_add(head_.W, k.a2.data(), k.out.data());
    k.valid = true;
    return k.out;
  }

  /// Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Sequence& obs, const Sequence& task, const QNetCache& k, std::span<const double> dq,
                QNet& grad) const {
    if (!k.valid) throw std::logic_error("backward called without a forward cache");
    if (dq.size() != shape_.actions) throw ShapeError("output gradient has the wrong length");
    if (!(grad.shape_ == shape_)) throw ShapeError("gradient accumulator has a different shape");
    const std::size_t W = shape_.width;
    outer_add(grad.head_.W, dq.data(), k.a2.data());
    for (std::size_t r = 0; r < shape_.actions; ++r) grad.head_.b[r] += dq[r];
    Vec d2(W, 0.0);
    gemv_t_add(head_.W, dq.data(), d2.data());
    for (std::size_t j = 0; j < W; ++j)
      if (k.a2[j] <= 0.0) d2[j] = 0.0;
    outer_add(grad.d2_.W, d2.data(), k.a1.data());
    for (std::size_t j = 0; j < W; ++j) grad.d2_.b[j] += d2[j];
    Vec d1(W, 0.0);
    gemv_t_add(d2_.W, d2.data(), d1.data());
    for (std::size_t j = 0; j < W; ++j)
      if (k.a1[j] <= 0.0) d1[j] = 0.0;
    for (std::size_t j = 0; j < W; ++j) grad.d1_.b[j] += d1[j];
    if (shape_.arch == Architecture::TwinLstm) {
      outer_add(grad.d1_.W, d1.data(), k.z0.data());
      Vec dz0(k.z0.size(), 0.0);
      gemv_t_add(d1_.W, d1.data(), dz0.data());
      lstm_backward(obs_, obs, k.obs, dz0.data(), grad.obs_);
      lstm_backward(task_, task, k.task, dz0.data() + shape_.obs_hidden, grad.task_);
    } else {
      for (std::size_t r = 0; r < W; ++r) {
        double* w = grad.d1_.W.row(r);
        for (std::size_t c : k.active) w[c] += d1[r];
      }
    }
  }

  friend bool operator==(const QNet&, const QNet&) = default;

 private:
  QNetShape shape_;
  Lstm obs_, task_;
  Linear d1_, d2_, head_;
};

}  // namespace ldgba::neural
