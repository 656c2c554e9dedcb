#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/product/product.hpp"

namespace ldgba::product {

struct ExplicitEdge {
  std::uint32_t to;
  double prob;
  double reward;
};

/// Product with label sampling marginalised into the transition
/// probabilities. Every (s, q) pair is a state, indexed s * |Q| + q.
struct ExplicitMdp {
  std::size_t pomdp_states = 0;
  std::size_t automaton_states = 0;
  std::size_t actions = 0;                        // product action space
  std::vector<std::vector<ExplicitEdge>> rows;    // [state * actions + action]; empty = unavailable

  std::size_t size() const { return pomdp_states * automaton_states; }
  std::uint32_t index(ProductState x) const { return static_cast<std::uint32_t>(x.s * automaton_states + x.q); }
  ProductState state(std::uint32_t i) const {
    return {static_cast<std::uint32_t>(i / automaton_states), static_cast<StateId>(i % automaton_states)};
  }
  const std::vector<ExplicitEdge>& row(std::uint32_t x, std::uint32_t a) const { return rows.at(x * actions + a); }
  bool available(std::uint32_t x, std::uint32_t a) const { return !row(x, a).empty(); }
};

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ExplicitMdp enumerate_explicit(const Product& p, std::size_t bound = 50000) {
  const PlPomdp& m = p.pomdp();
  const Ldgba& a = p.automaton();
  ExplicitMdp out;
  out.pomdp_states = m.state_count();
  out.automaton_states = a.size();
  out.actions = p.action_space();
  if (out.size() > bound)
    throw BoundExceeded("product has " + std::to_string(out.size()) + " states, bound is " + std::to_string(bound));
  out.rows.resize(out.size() * out.actions);
  for (std::uint32_t xi = 0; xi < out.size(); ++xi) {
    const ProductState x = out.state(xi);
    for (std::uint32_t act : p.available_actions(x)) {
      auto& row = out.rows[xi * out.actions + act];
      if (p.is_epsilon(act)) {
        const ProductState next{x.s, p.epsilon_target(x, act)};
        row.push_back({out.index(next), 1.0, 0.0});
        continue;
      }
      std::map<std::uint32_t, double> mass;
      for (const auto& t : m.transitions(x.s, act))
        for (const auto& l : m.label_distribution(t.next))
          mass[out.index({t.next, p.advance(x.q, l.label)})] += t.prob * l.prob;
      for (auto [to, prob] : mass)
        if (prob > 0) row.push_back({to, prob, p.reward(x, act, out.state(to))});
    }
  }
  return out;
}

/// Row sums and probability ranges; one message per bad row.
inline std::vector<std::string> validate(const ExplicitMdp& e) {
  std::vector<std::string> out;
  for (std::uint32_t x = 0; x < e.size(); ++x) {
    bool any = false;
    for (std::uint32_t a = 0; a < e.actions; ++a) {
      const auto& row = e.row(x, a);
      if (row.empty()) continue;
      any = true;
      double sum = 0;
      for (const auto& edge : row) {
        if (!(edge.prob > 0 && edge.prob <= 1) || edge.to >= e.size())
          out.push_back("bad edge in row (" + std::to_string(x) + ", " + std::to_string(a) + ")");
        sum += edge.prob;
      }
      if (std::abs(sum - 1.0) > pomdp::kStochasticTolerance)
        out.push_back("row (" + std::to_string(x) + ", " + std::to_string(a) + ") sums to " + std::to_string(sum));
    }
    if (!any) out.push_back("state " + std::to_string(x) + " has no action");
  }
  return out;
}

/// States reachable from the given ones under any action.
inline std::vector<bool> reachable(const ExplicitMdp& e, const std::vector<std::uint32_t>& from) {
  std::vector<bool> seen(e.size(), false);
  std::vector<std::uint32_t> stack;
  for (auto x : from)
    if (!seen[x]) {
      seen[x] = true;
      stack.push_back(x);
    }
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (std::uint32_t a = 0; a < e.actions; ++a)
      for (const auto& edge : e.row(x, a))
        if (!seen[edge.to]) {
          seen[edge.to] = true;
          stack.push_back(edge.to);
        }
  }
  return seen;
}

}  // namespace ldgba::product
