#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/logic/atoms.hpp"

namespace ldgba::automata {

using logic::AtomSet;
using logic::Symbol;
using StateId = std::uint32_t;

enum class Part { Deterministic, Nondeterministic };

/// Limit-deterministic generalized Buchi automaton with state-based
/// acceptance. Symbol transitions are stored densely per (state, symbol);
/// epsilon edges separately per state.
class Ldgba {
 public:
  static constexpr std::size_t max_acceptance_sets = 32;

  Ldgba() = default;
  Ldgba(AtomSet atoms, std::size_t states)
      : atoms_(std::move(atoms)),
        parts_(states, Part::Deterministic),
        delta_(states * atoms_.symbol_count()),
        eps_(states),
        acc_mask_(states, 0) {}

  const AtomSet& atoms() const { return atoms_; }
  std::size_t size() const { return parts_.size(); }
  std::size_t symbol_count() const { return atoms_.symbol_count(); }
  StateId initial() const { return initial_; }
  Part part(StateId q) const { return parts_.at(check(q)); }
  bool deterministic(StateId q) const { return part(q) == Part::Deterministic; }

  void set_initial(StateId q) { initial_ = check(q); }
  void set_part(StateId q, Part p) { parts_.at(check(q)) = p; }

  void add_edge(StateId from, Symbol sym, StateId to) {
    check(to);
    auto& succ = delta_.at(slot(from, sym));
    auto it = std::lower_bound(succ.begin(), succ.end(), to);
    if (it == succ.end() || *it != to) succ.insert(it, to);
  }

  void add_epsilon(StateId from, StateId to) {
    check(to);
    auto& succ = eps_.at(check(from));
    auto it = std::lower_bound(succ.begin(), succ.end(), to);
    if (it == succ.end() || *it != to) succ.insert(it, to);
  }

  /// Appends an acceptance set F_i; returns its index.
  std::size_t add_acceptance_set(std::vector<StateId> states) {
    if (sets_.size() >= max_acceptance_sets) throw std::length_error("too many acceptance sets");
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    const std::size_t idx = sets_.size();
    for (StateId q : states) acc_mask_.at(check(q)) |= 1u << idx;
    sets_.push_back(std::move(states));
    return idx;
  }

  std::size_t acceptance_set_count() const { return sets_.size(); }
  const std::vector<StateId>& acceptance_set(std::size_t i) const { return sets_.at(i); }
  std::uint32_t acceptance_mask(StateId q) const { return acc_mask_.at(check(q)); }
  std::uint32_t full_mask() const {
    return sets_.size() == 32 ? ~0u : ((1u << sets_.size()) - 1u);
  }
  bool accepting(StateId q) const { return acceptance_mask(q) != 0; }

  /// Symbol successors of q: exactly one for a valid deterministic state,
  /// possibly empty for a nondeterministic one. Epsilon successors are separate.
  std::span<const StateId> successors(StateId q, Symbol sym) const { return delta_.at(slot(q, sym)); }
  std::span<const StateId> epsilon_successors(StateId q) const { return eps_.at(check(q)); }
  bool has_epsilon() const {
    return std::any_of(eps_.begin(), eps_.end(), [](const auto& e) { return !e.empty(); });
  }

  /// Unique successor of a deterministic move. For a nondeterministic state
  /// the lowest-numbered symbol successor is returned.
  StateId step(StateId q, Symbol sym) const {
    auto succ = successors(q, sym);
    if (succ.empty()) throw std::logic_error("state " + std::to_string(q) + " has no successor on " + atoms_.format(sym));
    return succ.front();
  }

  /// States from which no accepting cycle can be reached (every F_i visited
  /// inside one strongly connected component).
  std::vector<bool> trap_states() const;

  friend bool operator==(const Ldgba&, const Ldgba&) = default;

 private:
  StateId check(StateId q) const {
    if (q >= parts_.size()) throw std::out_of_range("unknown automaton state " + std::to_string(q));
    return q;
  }
  std::size_t slot(StateId q, Symbol sym) const {
    if (sym.bits >= symbol_count()) throw std::out_of_range("symbol outside alphabet");
    return static_cast<std::size_t>(check(q)) * symbol_count() + sym.bits;
  }

  AtomSet atoms_;
  StateId initial_ = 0;
  std::vector<Part> parts_;
  std::vector<std::vector<StateId>> delta_;
  std::vector<std::vector<StateId>> eps_;
  std::vector<std::uint32_t> acc_mask_;
  std::vector<std::vector<StateId>> sets_;
};

namespace detail {

/// Iterative Tarjan over an implicit graph with nodes [0, n). Returns the
/// component index of every node reachable from `roots` (-1 otherwise).
template <class Successors>
std::vector<long> strongly_connected(std::size_t n, const std::vector<std::size_t>& roots, Successors&& succ,
                                     std::size_t& component_count) {
  std::vector<long> comp(n, -1), index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t node;
    std::vector<std::size_t> next;
    std::size_t pos;
  };
  std::vector<Frame> call;
  long counter = 0;
  component_count = 0;
  for (std::size_t root : roots) {
    if (index[root] >= 0) continue;
    call.push_back({root, succ(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& fr = call.back();
      if (fr.pos < fr.next.size()) {
        std::size_t w = fr.next[fr.pos++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, succ(w), 0});
        } else if (on_stack[w]) {
          low[fr.node] = std::min(low[fr.node], index[w]);
        }
        continue;
      }
      const std::size_t v = fr.node;
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = static_cast<long>(component_count);
        } while (w != v);
        ++component_count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
    }
  }
  return comp;
}

}  // namespace detail

inline std::vector<bool> Ldgba::trap_states() const {
  const std::size_t n = size();
  auto succ = [&](std::size_t q) {
    std::vector<std::size_t> out;
    for (std::uint32_t s = 0; s < symbol_count(); ++s)
      for (StateId t : successors(static_cast<StateId>(q), Symbol{s})) out.push_back(t);
    for (StateId t : epsilon_successors(static_cast<StateId>(q))) out.push_back(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  std::vector<std::size_t> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = i;
  std::size_t count = 0;
  auto comp = detail::strongly_connected(n, roots, succ, count);

  // A component is good when it contains a cycle and covers every set.
  std::vector<std::uint32_t> mask(count, 0);
  std::vector<std::size_t> members(count, 0);
  std::vector<bool> self_loop(count, false);
  for (std::size_t q = 0; q < n; ++q) {
    mask[comp[q]] |= acc_mask_[q];
    ++members[comp[q]];
    for (auto t : succ(q))
      if (t == q) self_loop[comp[q]] = true;
  }
  std::vector<bool> alive(n, false);
  for (std::size_t q = 0; q < n; ++q) {
    auto c = comp[q];
    alive[q] = (members[c] > 1 || self_loop[c]) && (mask[c] & full_mask()) == full_mask() && !sets_.empty();
  }
  // backward closure: anything that reaches a good component is alive
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (alive[q]) continue;
      for (auto t : succ(q)) {
        if (alive[t]) {
          alive[q] = true;
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<bool> trap(n);
  for (std::size_t q = 0; q < n; ++q) trap[q] = !alive[q];
  return trap;
}

/// Checks the structural LDGBA conditions; each violation is described in one line.
inline std::vector<std::string> validate(const Ldgba& a) {
  std::vector<std::string> out;
  const std::size_t n = a.size();
  if (n == 0) {
    out.push_back("automaton has no states");
    return out;
  }
  if (a.initial() >= n) out.push_back("initial state out of range");
  if (a.acceptance_set_count() == 0) out.push_back("no acceptance sets");
  auto name = [](StateId q) { return "q" + std::to_string(q); };
  for (StateId q = 0; q < n; ++q) {
    const bool det = a.deterministic(q);
    if (det) {
      for (std::uint32_t s = 0; s < a.symbol_count(); ++s) {
        auto succ = a.successors(q, Symbol{s});
        const std::string sym = a.atoms().format(Symbol{s});
        if (succ.size() != 1) {
          out.push_back("deterministic state " + name(q) + " has " + std::to_string(succ.size()) +
                        " successors on " + sym);
        }
        for (StateId t : succ)
          if (!a.deterministic(t))
            out.push_back("transition from deterministic state " + name(q) + " on " + sym +
                          " leaves the deterministic part (" + name(t) + ")");
      }
      if (!a.epsilon_successors(q).empty()) out.push_back("eps from deterministic state " + name(q));
    } else {
      for (StateId t : a.epsilon_successors(q))
        if (!a.deterministic(t))
          out.push_back("eps from " + name(q) + " targets nondeterministic state " + name(t));
    }
  }
  for (std::size_t i = 0; i < a.acceptance_set_count(); ++i)
    for (StateId q : a.acceptance_set(i))
      if (!a.deterministic(q))
        out.push_back("acceptance set " + std::to_string(i) + " contains nondeterministic state " + name(q));
  return out;
}

}  // namespace ldgba::automata
