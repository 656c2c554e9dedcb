#pragma once

#include <vector>

#include "ldgba/automata/ldgba.hpp"
#include "ldgba/logic/semantics.hpp"

namespace ldgba::automata {

/// Whether some run of `a` on prefix . cycle^omega visits every acceptance
/// set infinitely often. The run graph has nodes (state, position); symbol
/// moves advance the position, epsilon moves keep it. Since epsilon edges
/// only lead into the deterministic part, every cycle consumes input.
inline bool accepts_lasso(const Ldgba& a, const logic::LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso cycle must be non-empty");
  if (a.acceptance_set_count() == 0) return false;
  const std::size_t positions = w.positions();
  const std::size_t n = a.size() * positions;
  auto node = [&](StateId q, std::size_t i) { return static_cast<std::size_t>(q) * positions + i; };
  auto succ = [&](std::size_t v) {
    const auto q = static_cast<StateId>(v / positions);
    const std::size_t i = v % positions;
    std::vector<std::size_t> out;
    for (StateId t : a.successors(q, w.at(i))) out.push_back(node(t, w.successor(i)));
    for (StateId t : a.epsilon_successors(q)) out.push_back(node(t, i));
    return out;
  };
  std::size_t count = 0;
  auto comp = detail::strongly_connected(n, {node(a.initial(), 0)}, succ, count);

  std::vector<std::uint32_t> mask(count, 0);
  std::vector<std::size_t> members(count, 0);
  std::vector<bool> cyclic(count, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] < 0) continue;
    const auto c = static_cast<std::size_t>(comp[v]);
    mask[c] |= a.acceptance_mask(static_cast<StateId>(v / positions));
    ++members[c];
    for (auto t : succ(v))
      if (t == v) cyclic[c] = true;
  }
  for (std::size_t c = 0; c < count; ++c) {
    if ((members[c] > 1 || cyclic[c]) && (mask[c] & a.full_mask()) == a.full_mask()) return true;
  }
  return false;
}

}  // namespace ldgba::automata
