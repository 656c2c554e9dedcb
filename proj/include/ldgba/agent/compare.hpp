#pragma once

#include <cmath>
#include <vector>

#include "ldgba/agent/learner.hpp"
#include "ldgba/product/explicit.hpp"
#include "ldgba/product/value_iteration.hpp"

namespace ldgba::agent {

struct PolicyAgreement {
  std::size_t states = 0;   // reachable, non-trap product states compared
  std::size_t agree = 0;
  double mean_q_gap = 0.0;  // mean of V*(x) - Q*(x, network action)

  double fraction() const { return states == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(states); }
};

/// Most likely observation on arriving in s (lowest index on ties), over
/// every action.
inline std::uint32_t typical_observation(const pomdp::PlPomdp& m, std::uint32_t s) {
  std::vector<double> mass(m.observation_count(), 0.0);
  for (std::uint32_t a = 0; a < m.action_count(); ++a)
    for (const auto& w : m.observations(s, a)) mass[w.index] += w.prob;
  return static_cast<std::uint32_t>(std::max_element(mass.begin(), mass.end()) - mass.begin());
}

/// Compares a task-aware network's greedy environment action against the
/// value-iteration policy on every product state reachable from `starts`.
/// The network is probed with a window that repeats the state's typical
/// observation and a task window that repeats q. An action agrees when it
/// is optimal for the oracle up to a relative 1e-9 slack, so ties count.
/// With `deterministic_only`, states whose q has epsilon edges are skipped:
/// there the epsilon choice belongs to the fixed epsilon policy, which the
/// oracle instead optimises.
inline PolicyAgreement compare_policy(const Product& p, const QNet& net, const product::ExplicitMdp& e,
                                      const product::QTable& t, const std::vector<std::uint32_t>& starts,
                                      bool deterministic_only = false) {
  const QNetShape& shape = net.shape();
  if (shape.task_vocab != p.automaton().size() || shape.actions != p.env_action_count())
    throw std::invalid_argument("comparison needs a task-aware network for this product");
  std::vector<std::uint32_t> from;
  for (std::uint32_t s : starts) from.push_back(e.index({s, p.automaton().initial()}));
  const auto reach = product::reachable(e, from);
  const auto limit = static_cast<std::uint32_t>(p.env_action_count());
  PolicyAgreement r;
  double gap = 0.0;
  for (std::uint32_t x = 0; x < e.size(); ++x) {
    const ProductState ps = e.state(x);
    if (!reach[x] || p.trap(ps.q)) continue;
    if (deterministic_only && !p.automaton().epsilon_successors(ps.q).empty()) continue;
    const neural::Sequence obs{shape.obs_vocab,
                               std::vector<std::int32_t>(shape.obs_len,
                                                         static_cast<std::int32_t>(typical_observation(p.pomdp(), ps.s)))};
    const neural::Sequence task{shape.task_vocab, std::vector<std::int32_t>(shape.task_len, static_cast<std::int32_t>(ps.q))};
    const std::uint32_t a = greedy_action(p, ps.s, net.forward(obs, task));
    const double best = t.value(x, limit), got = t.at(x, a);
    ++r.states;
    gap += best - got;
    if (got >= best - 1e-9 * std::max(1.0, std::abs(best))) ++r.agree;
  }
  if (r.states > 0) r.mean_q_gap = gap / static_cast<double>(r.states);
  return r;
}

}  // namespace ldgba::agent
