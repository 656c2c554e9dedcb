#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/automata/ldgba.hpp"
#include "ldgba/logic/parser.hpp"

namespace ldgba::translate {

using automata::Ldgba;
using automata::Part;
using automata::StateId;
using logic::AtomSet;
using logic::Formula;
using logic::Op;
using logic::Symbol;

class FragmentError : public std::runtime_error {
 public:
  explicit FragmentError(const Formula& f)
      : std::runtime_error("formula outside the supported fragment: " + logic::to_string(f)), subformula_(f) {}
  const Formula& subformula() const { return subformula_; }

 private:
  Formula subformula_;
};

enum class ConjunctKind { Safety, Recurrence, Surveillance, Sequence, Reachability, RecurrenceChoice };

/// One matched conjunct with its propositional guards.
struct Conjunct {
  ConjunctKind kind;
  Formula source;
  Formula guard;                   // G!g, GFg, F g, (!guard U goal), GF(guard & F goal)
  Formula goal;                    // Sequence and Surveillance only
  std::vector<Formula> branches;   // RecurrenceChoice only: the g_k of GF g_1 | ... | GF g_n
};

inline bool is_propositional(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Atom: return true;
    case Op::Not: return is_propositional(f.operand());
    case Op::And:
    case Op::Or: return is_propositional(f.lhs()) && is_propositional(f.rhs());
    default: return false;
  }
}

inline bool eval_propositional(const Formula& f, Symbol s, const AtomSet& atoms) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::Atom: return s.has(atoms.index_of(f.name()));
    case Op::Not: return !eval_propositional(f.operand(), s, atoms);
    case Op::And: return eval_propositional(f.lhs(), s, atoms) && eval_propositional(f.rhs(), s, atoms);
    case Op::Or: return eval_propositional(f.lhs(), s, atoms) || eval_propositional(f.rhs(), s, atoms);
    default: throw std::logic_error("temporal operator in propositional guard");
  }
}

namespace detail {

inline void flatten(const Formula& f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

inline std::optional<Formula> recurrence_guard(const Formula& f) {
  if (f.op() == Op::Always && f.operand().op() == Op::Eventually && is_propositional(f.operand().operand()))
    return f.operand().operand();
  return std::nullopt;
}

}  // namespace detail

/// Splits a formula into fragment conjuncts, throwing FragmentError on the
/// first conjunct that matches no supported shape.
inline std::vector<Conjunct> match_fragment(const Formula& f) {
  std::vector<Formula> parts;
  detail::flatten(f, Op::And, parts);
  std::vector<Conjunct> out;
  for (const auto& c : parts) {
    if (c.op() == Op::True) continue;
    if (c.op() == Op::Always && c.operand().op() == Op::Not && is_propositional(c.operand().operand())) {
      out.push_back({ConjunctKind::Safety, c, c.operand().operand(), {}, {}});
      continue;
    }
    if (auto g = detail::recurrence_guard(c)) {
      out.push_back({ConjunctKind::Recurrence, c, *g, {}, {}});
      continue;
    }
    if (c.op() == Op::Always && c.operand().op() == Op::Eventually && c.operand().operand().op() == Op::And) {
      const Formula inner = c.operand().operand();
      if (is_propositional(inner.lhs()) && inner.rhs().op() == Op::Eventually &&
          is_propositional(inner.rhs().operand())) {
        out.push_back({ConjunctKind::Surveillance, c, inner.lhs(), inner.rhs().operand(), {}});
        continue;
      }
    }
    if (c.op() == Op::Until && c.lhs().op() == Op::Not && is_propositional(c.lhs().operand()) &&
        is_propositional(c.rhs())) {
      out.push_back({ConjunctKind::Sequence, c, c.lhs().operand(), c.rhs(), {}});
      continue;
    }
    if (c.op() == Op::Eventually && is_propositional(c.operand())) {
      out.push_back({ConjunctKind::Reachability, c, {}, c.operand(), {}});
      continue;
    }
    if (c.op() == Op::Or) {
      std::vector<Formula> leaves;
      detail::flatten(c, Op::Or, leaves);
      Conjunct choice{ConjunctKind::RecurrenceChoice, c, {}, {}, {}};
      for (const auto& leaf : leaves) {
        auto g = detail::recurrence_guard(leaf);
        if (!g) throw FragmentError(leaf);
        choice.branches.push_back(*g);
      }
      out.push_back(std::move(choice));
      continue;
    }
    throw FragmentError(c);
  }
  std::size_t choices = 0;
  for (const auto& c : out) {
    if (c.kind != ConjunctKind::RecurrenceChoice) continue;
    if (++choices > 1) throw FragmentError(c.source);
  }
  return out;
}

namespace detail {

// Deterministic core shared by all branches. Bit k of `state` is the phase of
// stateful component k (surveillance: waiting for goal; sequence: done).
class Core {
 public:
  struct Move {
    bool trap = false;
    std::uint64_t state = 0;
    std::uint32_t marks = 0;
  };

  Core(const std::vector<Conjunct>& conjuncts, const AtomSet& atoms) : atoms_(atoms) {
    for (const auto& c : conjuncts) {
      if (c.kind == ConjunctKind::RecurrenceChoice) {
        choice_set_ = static_cast<int>(next_set_++);
        for (const auto& b : c.branches) branch_guards_.push_back(table(b));
        continue;
      }
      Item it;
      it.kind = c.kind;
      if (c.kind == ConjunctKind::Safety || c.kind == ConjunctKind::Recurrence || c.kind == ConjunctKind::Sequence ||
          c.kind == ConjunctKind::Surveillance)
        it.guard = table(c.guard);
      if (c.kind == ConjunctKind::Sequence || c.kind == ConjunctKind::Surveillance ||
          c.kind == ConjunctKind::Reachability)
        it.goal = table(c.goal);
      if (c.kind == ConjunctKind::Reachability) it.guard.assign(atoms.symbol_count(), false);
      if (c.kind != ConjunctKind::Safety) it.set = next_set_++;
      if (c.kind == ConjunctKind::Surveillance) it.set_goal = next_set_++;
      if (c.kind == ConjunctKind::Surveillance || c.kind == ConjunctKind::Sequence ||
          c.kind == ConjunctKind::Reachability)
        it.bit = stateful_++;
      items_.push_back(std::move(it));
    }
    if (stateful_ > 63) throw std::length_error("too many stateful conjuncts");
  }

  std::size_t set_count() const { return next_set_; }
  std::size_t branch_count() const { return branch_guards_.size(); }

  // Move of the core on `sym`; `branch` selects the active recurrence
  // disjunct (or none while still undecided).
  Move step(std::uint64_t state, Symbol sym, std::optional<std::size_t> branch) const {
    Move m;
    m.state = state;
    for (const auto& it : items_) {
      const bool g = it.guard.empty() ? false : it.guard[sym.bits];
      const bool goal = it.goal.empty() ? false : it.goal[sym.bits];
      const std::uint64_t bit = std::uint64_t{1} << it.bit;
      switch (it.kind) {
        case ConjunctKind::Safety:
          if (g) m.trap = true;
          break;
        case ConjunctKind::Recurrence:
          if (g) m.marks |= 1u << it.set;
          break;
        case ConjunctKind::Surveillance:
          if (!(state & bit)) {
            if (g && goal) m.marks |= (1u << it.set) | (1u << it.set_goal);
            else if (g) {
              m.state |= bit;
              m.marks |= 1u << it.set;
            }
          } else if (goal) {
            m.state &= ~bit;
            m.marks |= 1u << it.set_goal;
          }
          break;
        case ConjunctKind::Sequence:
        case ConjunctKind::Reachability:
          if (!(state & bit)) {
            if (goal) m.state |= bit;
            else if (g) m.trap = true;
          }
          if (m.state & bit) m.marks |= 1u << it.set;
          break;
        default: break;
      }
    }
    if (branch && branch_guards_[*branch][sym.bits]) m.marks |= 1u << choice_set_;
    if (m.trap) {
      m.state = 0;
      m.marks = 0;
    }
    return m;
  }

 private:
  struct Item {
    ConjunctKind kind;
    std::vector<bool> guard, goal;
    std::size_t set = 0, set_goal = 0, bit = 0;
  };

  std::vector<bool> table(const Formula& g) const {
    std::vector<bool> t(atoms_.symbol_count());
    for (std::uint32_t s = 0; s < t.size(); ++s) t[s] = eval_propositional(g, Symbol{s}, atoms_);
    return t;
  }

  const AtomSet& atoms_;
  std::vector<Item> items_;
  std::vector<std::vector<bool>> branch_guards_;
  std::size_t next_set_ = 0;
  std::size_t stateful_ = 0;
  int choice_set_ = -1;
};

}  // namespace detail

/// Builds an LDGBA for a formula in the supported fragment over `atoms`
/// (which must contain every atom of `f`).
///
/// Deterministic states are pairs (core, marks) where `marks` records the
/// acceptance sets hit by the move that entered the state, turning the
/// natural transition-based acceptance into state-based acceptance. A
/// disjunction of recurrences adds a nondeterministic initial part that
/// tracks the other conjuncts and offers one epsilon edge per disjunct.
inline Ldgba translate(const Formula& f, const AtomSet& atoms) {
  {
    auto used = logic::atoms_of(f);
    if (!used.is_subset_of(atoms)) throw std::invalid_argument("formula uses atoms outside the alphabet");
  }
  const auto conjuncts = match_fragment(f);
  const detail::Core core(conjuncts, atoms);
  const bool choice = core.branch_count() > 0;

  // State keys: kind 0 = nondeterministic core, 1 = deterministic, 2 = trap.
  struct Key {
    int kind;
    std::size_t branch;
    std::uint64_t core;
    std::uint32_t marks;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, StateId> ids;
  std::vector<Key> keys;
  auto intern = [&](const Key& k) {
    auto [it, fresh] = ids.emplace(k, static_cast<StateId>(keys.size()));
    if (fresh) keys.push_back(k);
    return it->second;
  };
  const Key trap{2, 0, 0, 0};
  intern(choice ? Key{0, 0, 0, 0} : Key{1, 0, 0, 0});

  struct Edge {
    StateId from;
    std::uint32_t sym;
    StateId to;
  };
  std::vector<Edge> edges, eps;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Key k = keys[i];
    const auto from = static_cast<StateId>(i);
    if (k.kind == 2) {
      for (std::uint32_t s = 0; s < atoms.symbol_count(); ++s) edges.push_back({from, s, from});
      continue;
    }
    if (k.kind == 0) {
      for (std::size_t b = 0; b < core.branch_count(); ++b) eps.push_back({from, 0, intern(Key{1, b, k.core, 0})});
    }
    std::optional<std::size_t> branch;
    if (k.kind == 1 && choice) branch = k.branch;
    for (std::uint32_t s = 0; s < atoms.symbol_count(); ++s) {
      const auto m = core.step(k.core, Symbol{s}, branch);
      StateId to;
      if (m.trap) to = intern(trap);
      else if (k.kind == 0) to = intern(Key{0, 0, m.state, 0});
      else to = intern(Key{1, k.branch, m.state, m.marks});
      edges.push_back({from, s, to});
    }
  }

  Ldgba a(atoms, keys.size());
  a.set_initial(0);
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i].kind == 0) a.set_part(static_cast<StateId>(i), Part::Nondeterministic);
  for (const auto& e : edges) a.add_edge(e.from, Symbol{e.sym}, e.to);
  for (const auto& e : eps) a.add_epsilon(e.from, e.to);
  if (core.set_count() == 0) {
    // pure safety: every deterministic non-trap state is accepting
    std::vector<StateId> ok;
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i].kind == 1) ok.push_back(static_cast<StateId>(i));
    a.add_acceptance_set(std::move(ok));
  } else {
    for (std::size_t set = 0; set < core.set_count(); ++set) {
      std::vector<StateId> members;
      for (std::size_t i = 0; i < keys.size(); ++i)
        if (keys[i].kind == 1 && (keys[i].marks >> set & 1u)) members.push_back(static_cast<StateId>(i));
      a.add_acceptance_set(std::move(members));
    }
  }
  return a;
}

inline Ldgba translate(const Formula& f) { return translate(f, logic::atoms_of(f)); }

}  // namespace ldgba::translate
