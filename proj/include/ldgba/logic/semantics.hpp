#pragma once

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ldgba/logic/atoms.hpp"
#include "ldgba/logic/formula.hpp"

namespace ldgba::logic {

/// The ultimately periodic word prefix . cycle^omega.
struct LassoWord {
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;

  std::size_t positions() const { return prefix.size() + cycle.size(); }

  /// Successor of a canonical position; the last cycle position wraps to the cycle start.
  std::size_t successor(std::size_t i) const { return i + 1 < positions() ? i + 1 : prefix.size(); }

  Symbol at(std::size_t i) const { return i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()]; }
};

namespace detail {

class LassoEvaluator {
 public:
  LassoEvaluator(const LassoWord& w, const AtomSet& atoms) : w_(w), atoms_(atoms) {
    if (w.cycle.empty()) throw std::invalid_argument("lasso cycle must be non-empty");
  }

  // Truth of `f` at every canonical position, memoized per subformula node.
  const std::vector<bool>& eval(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    const std::size_t n = w_.positions();
    std::vector<bool> v(n, false);
    switch (f.op()) {
      case Op::True: v.assign(n, true); break;
      case Op::Atom: {
        const std::size_t bit = atoms_.index_of(f.name());
        for (std::size_t i = 0; i < n; ++i) v[i] = w_.at(i).has(bit);
        break;
      }
      case Op::Not: {
        const auto& a = eval(f.operand());
        for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
        break;
      }
      case Op::And: {
        const auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        const auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[i] || b[i];
        break;
      }
      case Op::Next: {
        const auto& a = eval(f.operand());
        for (std::size_t i = 0; i < n; ++i) v[i] = a[w_.successor(i)];
        break;
      }
      case Op::Until: v = until(eval(f.lhs()), eval(f.rhs())); break;
      case Op::Eventually: v = until(std::vector<bool>(n, true), eval(f.operand())); break;
      case Op::Always: {
        auto neg = eval(f.operand());
        neg.flip();
        v = until(std::vector<bool>(n, true), neg);
        v.flip();
        break;
      }
    }
    return memo_.emplace(f.id(), std::move(v)).first->second;
  }

 private:
  // Least fixpoint of v = b | (a & X v) over the finite position graph.
  std::vector<bool> until(const std::vector<bool>& a, const std::vector<bool>& b) const {
    const std::size_t n = w_.positions();
    std::vector<bool> v = b;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = n; k-- > 0;) {
        if (!v[k] && a[k] && v[w_.successor(k)]) {
          v[k] = true;
          changed = true;
        }
      }
    }
    return v;
  }

  const LassoWord& w_;
  const AtomSet& atoms_;
  std::unordered_map<const void*, std::vector<bool>> memo_;
};

}  // namespace detail

/// Whether prefix . cycle^omega satisfies `f`.
inline bool eval_lasso(const Formula& f, const LassoWord& w, const AtomSet& atoms) {
  detail::LassoEvaluator ev(w, atoms);
  return ev.eval(f)[0];
}

}  // namespace ldgba::logic
