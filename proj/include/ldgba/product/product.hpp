#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ldgba/automata/ldgba.hpp"
#include "ldgba/pomdp/pl_pomdp.hpp"
#include "ldgba/product/reward.hpp"

namespace ldgba::product {

using automata::Ldgba;
using automata::StateId;
using logic::Symbol;
using pomdp::PlPomdp;
using pomdp::Rng;

struct ProductState {
  std::uint32_t s = 0;
  StateId q = 0;
  friend bool operator==(const ProductState&, const ProductState&) = default;
  friend auto operator<=>(const ProductState&, const ProductState&) = default;
};

struct ProductStep {
  ProductState next;
  std::optional<std::uint32_t> observation;  // none after an epsilon move
  std::optional<Symbol> label;               // environment label, none after an epsilon move
  double reward = 0.0;
  bool was_epsilon = false;
};

/// Lazy product of a PL-POMDP with an LDGBA. Product actions are numbered
/// environment actions first (0 .. |A|-1), then one epsilon action per
/// epsilon edge of the current automaton state (|A| + k for the k-th edge).
class Product {
 public:
  Product(const PlPomdp& m, const Ldgba& a, RewardMode mode = RewardMode::Base, double base_reward = 10.0)
      : m_(&m), a_(&a), mode_(mode), base_reward_(base_reward), project_(m.atoms(), a.atoms()), trap_(a.trap_states()) {
    if (!a.atoms().is_subset_of(m.atoms()))
      throw std::invalid_argument("automaton atoms are not a subset of the environment atoms");
  }

  const PlPomdp& pomdp() const { return *m_; }
  const Ldgba& automaton() const { return *a_; }
  RewardMode reward_mode() const { return mode_; }
  double base_reward() const { return base_reward_; }

  std::uint32_t env_action_count() const { return static_cast<std::uint32_t>(m_->action_count()); }
  bool is_epsilon(std::uint32_t action) const { return action >= env_action_count(); }
  std::size_t max_epsilon_count() const {
    std::size_t k = 0;
    for (StateId q = 0; q < a_->size(); ++q) k = std::max(k, a_->epsilon_successors(q).size());
    return k;
  }
  std::size_t action_space() const { return env_action_count() + max_epsilon_count(); }

  std::vector<std::uint32_t> available_actions(ProductState x) const {
    std::vector<std::uint32_t> out = m_->available_actions(x.s);
    for (std::size_t k = 0; k < a_->epsilon_successors(x.q).size(); ++k)
      out.push_back(env_action_count() + static_cast<std::uint32_t>(k));
    return out;
  }

  bool available(ProductState x, std::uint32_t action) const {
    if (is_epsilon(action)) return action - env_action_count() < a_->epsilon_successors(x.q).size();
    return m_->available(x.s, action);
  }

  StateId epsilon_target(ProductState x, std::uint32_t action) const {
    return a_->epsilon_successors(x.q)[action - env_action_count()];
  }

  /// Environment label seen through the automaton's alphabet.
  Symbol project(Symbol env_label) const { return project_(env_label); }

  /// Automaton successor on an environment label; nondeterministic states
  /// resolve to their lowest-numbered successor.
  StateId advance(StateId q, Symbol env_label) const { return a_->step(q, project_(env_label)); }

  double reward(ProductState x, std::uint32_t action, ProductState next) const {
    if (is_epsilon(action) || !a_->accepting(next.q)) return 0.0;
    if (mode_ == RewardMode::Redesigned && next.q == x.q) return 0.0;
    return base_reward_;
  }

  bool trap(StateId q) const { return trap_[q]; }

  ProductStep step(ProductState x, std::uint32_t action, Rng& rng) const {
    if (!available(x, action))
      throw std::invalid_argument("product action " + std::to_string(action) + " unavailable at (" +
                                  std::to_string(x.s) + ", q" + std::to_string(x.q) + ")");
    ProductStep out;
    if (is_epsilon(action)) {
      out.next = {x.s, epsilon_target(x, action)};
      out.was_epsilon = true;
      return out;
    }
    const pomdp::EnvStep e = m_->step(x.s, action, rng);
    out.next = {e.next, advance(x.q, e.label)};
    out.observation = e.observation;
    out.label = e.label;
    out.reward = reward(x, action, out.next);
    return out;
  }

 private:
  const PlPomdp* m_;
  const Ldgba* a_;
  RewardMode mode_;
  double base_reward_;
  logic::SymbolProjection project_;
  std::vector<bool> trap_;
};

}  // namespace ldgba::product
