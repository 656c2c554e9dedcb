#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ldgba/automata/ldgba.hpp"

namespace ldgba::automata {

/// Index of the first split label carried by `sym` (label-as-set-membership:
/// every atom of the label is set in the symbol), if any.
inline std::optional<std::size_t> carried_label(Symbol sym, const std::vector<Symbol>& labels) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (!labels[k].empty() && (sym.bits & labels[k].bits) == labels[k].bits) return k;
  return std::nullopt;
}

/// Duplicates every accepting state that is entered through edges carrying
/// two or more distinct split labels, so that each copy is entered only via
/// its own label. Copies keep the outgoing edges and acceptance membership
/// of the original, hence the language is unchanged. Edges carrying none of
/// the labels keep the original target.
inline Ldgba split_accepting(const Ldgba& a, const std::vector<Symbol>& labels) {
  const std::size_t n = a.size();
  const std::size_t nsym = a.symbol_count();

  // labels observed on edges into each accepting state, in label order
  std::vector<std::vector<bool>> entered(n, std::vector<bool>(labels.size(), false));
  for (StateId q = 0; q < n; ++q)
    for (std::uint32_t s = 0; s < nsym; ++s)
      for (StateId t : a.successors(q, Symbol{s}))
        if (a.accepting(t))
          if (auto k = carried_label(Symbol{s}, labels)) entered[t][*k] = true;

  // copy_of[t][k]: state that edges into t carrying label k are redirected to
  std::vector<std::vector<StateId>> copy_of(n);
  std::vector<StateId> origin;  // origin[id] = original state of every new state
  for (StateId q = 0; q < n; ++q) origin.push_back(q);
  for (StateId t = 0; t < n; ++t) {
    copy_of[t].assign(labels.size(), t);
    bool first = true;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (!entered[t][k]) continue;
      if (first) {
        first = false;
        continue;
      }
      copy_of[t][k] = static_cast<StateId>(origin.size());
      origin.push_back(t);
    }
  }
  if (origin.size() == n) return a;

  auto redirect = [&](StateId t, Symbol sym) {
    auto k = carried_label(sym, labels);
    return k ? copy_of[t][*k] : t;
  };

  Ldgba out(a.atoms(), origin.size());
  out.set_initial(a.initial());
  for (StateId id = 0; id < origin.size(); ++id) {
    const StateId src = origin[id];
    out.set_part(id, a.part(src));
    for (std::uint32_t s = 0; s < nsym; ++s)
      for (StateId t : a.successors(src, Symbol{s})) out.add_edge(id, Symbol{s}, redirect(t, Symbol{s}));
    for (StateId t : a.epsilon_successors(src)) out.add_epsilon(id, t);
  }
  for (std::size_t i = 0; i < a.acceptance_set_count(); ++i) {
    std::vector<StateId> members;
    for (StateId id = 0; id < origin.size(); ++id)
      if (a.acceptance_mask(origin[id]) >> i & 1u) members.push_back(id);
    out.add_acceptance_set(std::move(members));
  }
  return out;
}

}  // namespace ldgba::automata
