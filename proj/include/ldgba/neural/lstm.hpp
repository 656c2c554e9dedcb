#pragma once

#include <algorithm>

#include "ldgba/neural/tensor.hpp"

namespace ldgba::neural {

/// Single-layer LSTM over one-hot inputs. Gate rows are stacked in the
/// order input, forget, output, candidate.
struct Lstm {
  std::size_t input = 0, hidden = 0;
  Matrix W;  // 4H x input
  Matrix U;  // 4H x H
  Vec b;     // 4H

  Lstm() = default;
  Lstm(std::size_t in, std::size_t h) : input(in), hidden(h), W(4 * h, in), U(4 * h, h), b(4 * h, 0.0) {}

  void init(pomdp::Rng& rng) {
    init_uniform(W.v, input, rng);
    init_uniform(U.v, hidden, rng);
    std::fill(b.begin(), b.end(), 0.0);
    std::fill(b.begin() + hidden, b.begin() + 2 * hidden, 1.0);
  }

  friend bool operator==(const Lstm&, const Lstm&) = default;
};

struct LstmCache {
  std::size_t steps = 0;
  Vec gates;   // T x 4H, after activation
  Vec c;       // (T+1) x H, c[0] = 0
  Vec h;       // (T+1) x H, h[0] = 0
  Vec tanh_c;  // T x H
};

/// Final hidden state; zero initial hidden and cell state.
inline Vec lstm_forward(const Lstm& p, const Sequence& seq, LstmCache* cache = nullptr) {
  check_sequence(seq, p.input, "lstm");
  const std::size_t H = p.hidden, T = seq.size();
  LstmCache local;
  LstmCache& k = cache ? *cache : local;
  k.steps = T;
  k.gates.assign(T * 4 * H, 0.0);
  k.c.assign((T + 1) * H, 0.0);
  k.h.assign((T + 1) * H, 0.0);
  k.tanh_c.assign(T * H, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double* z = &k.gates[t * 4 * H];
    std::copy(p.b.begin(), p.b.end(), z);
    if (seq.items[t] >= 0) {
      const std::size_t col = static_cast<std::size_t>(seq.items[t]);
      for (std::size_t r = 0; r < 4 * H; ++r) z[r] += p.W(r, col);
    }
    const double* hp = &k.h[t * H];
    gemv_add(p.U, hp, z);
    const double* cp = &k.c[t * H];
    double* cn = &k.c[(t + 1) * H];
    double* hn = &k.h[(t + 1) * H];
    double* tc = &k.tanh_c[t * H];
    for (std::size_t j = 0; j < H; ++j) {
      const double i = sigmoid(z[j]), f = sigmoid(z[H + j]), o = sigmoid(z[2 * H + j]), g = std::tanh(z[3 * H + j]);
      z[j] = i;
      z[H + j] = f;
      z[2 * H + j] = o;
      z[3 * H + j] = g;
      cn[j] = f * cp[j] + i * g;
      tc[j] = std::tanh(cn[j]);
      hn[j] = o * tc[j];
    }
  }
  return Vec(k.h.begin() + static_cast<std::ptrdiff_t>(T * H), k.h.end());
}

/// Accumulates parameter gradients for an upstream gradient on the final
/// hidden state.
inline void lstm_backward(const Lstm& p, const Sequence& seq, const LstmCache& k, const double* dh_final, Lstm& grad) {
  const std::size_t H = p.hidden, T = k.steps;
  if (T != seq.size()) throw std::logic_error("lstm cache does not match the sequence");
  Vec dh(dh_final, dh_final + H), dc(H, 0.0), dz(4 * H), dh_prev(H);
  for (std::size_t t = T; t-- > 0;) {
    const double* gt = &k.gates[t * 4 * H];
    const double* cp = &k.c[t * H];
    const double* tc = &k.tanh_c[t * H];
    for (std::size_t j = 0; j < H; ++j) {
      const double i = gt[j], f = gt[H + j], o = gt[2 * H + j], g = gt[3 * H + j];
      const double d_o = dh[j] * tc[j];
      const double d_c = dc[j] + dh[j] * o * (1.0 - tc[j] * tc[j]);
      dz[j] = d_c * g * i * (1.0 - i);
      dz[H + j] = d_c * cp[j] * f * (1.0 - f);
      dz[2 * H + j] = d_o * o * (1.0 - o);
      dz[3 * H + j] = d_c * i * (1.0 - g * g);
      dc[j] = d_c * f;
    }
    if (seq.items[t] >= 0) {
      const std::size_t col = static_cast<std::size_t>(seq.items[t]);
      for (std::size_t r = 0; r < 4 * H; ++r) grad.W(r, col) += dz[r];
    }
    outer_add(grad.U, dz.data(), &k.h[t * H]);
    for (std::size_t r = 0; r < 4 * H; ++r) grad.b[r] += dz[r];
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    gemv_t_add(p.U, dz.data(), dh_prev.data());
    dh.swap(dh_prev);
  }
}

}  // namespace ldgba::neural
