#pragma once

// Seeded generators and independent oracles shared by the test suites.

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "ldgba/logic/atoms.hpp"
#include "ldgba/logic/formula.hpp"
#include "ldgba/logic/semantics.hpp"

namespace ldgba::testing {

using logic::AtomSet;
using logic::Formula;
using logic::LassoWord;
using logic::Op;
using logic::Symbol;

inline Formula random_formula(std::mt19937_64& rng, const AtomSet& atoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 1 ? 1 : 9);
  const int k = pick(rng);
  auto atom = [&] {
    std::uniform_int_distribution<std::size_t> a(0, atoms.size() - 1);
    return Formula::atom(atoms.name(a(rng)));
  };
  switch (k) {
    case 0: return std::uniform_int_distribution<int>(0, 5)(rng) == 0 ? Formula::truth() : atom();
    case 1: return atom();
    case 2: return Formula::negation(random_formula(rng, atoms, depth - 1));
    case 3: return Formula::conj(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    case 4: return Formula::disj(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    case 5: return Formula::next(random_formula(rng, atoms, depth - 1));
    case 6: return Formula::until(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    case 7: return Formula::eventually(random_formula(rng, atoms, depth - 1));
    case 8: return Formula::always(random_formula(rng, atoms, depth - 1));
    default: return Formula::negation(Formula::until(random_formula(rng, atoms, depth - 1), atom()));
  }
}

inline Symbol random_symbol(std::mt19937_64& rng, const AtomSet& atoms) {
  return Symbol{static_cast<std::uint32_t>(rng() % atoms.symbol_count())};
}

inline LassoWord random_lasso(std::mt19937_64& rng, const AtomSet& atoms, std::size_t max_prefix, std::size_t max_cycle) {
  LassoWord w;
  const std::size_t p = std::uniform_int_distribution<std::size_t>(0, max_prefix)(rng);
  const std::size_t c = std::uniform_int_distribution<std::size_t>(1, max_cycle)(rng);
  for (std::size_t i = 0; i < p; ++i) w.prefix.push_back(random_symbol(rng, atoms));
  for (std::size_t i = 0; i < c; ++i) w.cycle.push_back(random_symbol(rng, atoms));
  return w;
}

/// Textbook semantics over absolute positions of the unrolled word.
/// Temporal operators search witnesses up to |prefix| + 2|cycle| steps ahead;
/// truth values are periodic beyond the prefix, so this bound is exact.
class NaiveSemantics {
 public:
  NaiveSemantics(const LassoWord& w, const AtomSet& atoms) : w_(w), atoms_(atoms) {}

  bool sat(const Formula& f, std::size_t i) {
    i = canonical(i);
    auto key = std::make_pair(f.id(), i);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = false;
    const std::size_t horizon = i + w_.prefix.size() + 2 * w_.cycle.size();
    switch (f.op()) {
      case Op::True: r = true; break;
      case Op::Atom: r = w_.at(i).has(atoms_.index_of(f.name())); break;
      case Op::Not: r = !sat(f.operand(), i); break;
      case Op::And: r = sat(f.lhs(), i) && sat(f.rhs(), i); break;
      case Op::Or: r = sat(f.lhs(), i) || sat(f.rhs(), i); break;
      case Op::Next: r = sat(f.operand(), i + 1); break;
      case Op::Until:
        for (std::size_t t = i; t < horizon; ++t) {
          if (sat(f.rhs(), t)) {
            r = true;
            break;
          }
          if (!sat(f.lhs(), t)) break;
        }
        break;
      case Op::Eventually:
        for (std::size_t t = i; t < horizon && !r; ++t) r = sat(f.operand(), t);
        break;
      case Op::Always:
        r = true;
        for (std::size_t t = i; t < horizon && r; ++t) r = sat(f.operand(), t);
        break;
    }
    memo_[key] = r;
    return r;
  }

 private:
  std::size_t canonical(std::size_t i) const {
    const std::size_t p = w_.prefix.size();
    return i < p ? i : p + (i - p) % w_.cycle.size();
  }

  const LassoWord& w_;
  const AtomSet& atoms_;
  std::map<std::pair<const void*, std::size_t>, bool> memo_;
};

inline bool naive_eval(const Formula& f, const LassoWord& w, const AtomSet& atoms) {
  NaiveSemantics s(w, atoms);
  return s.sat(f, 0);
}

}  // namespace ldgba::testing
