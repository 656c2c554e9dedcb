#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldgba/logic/atoms.hpp"
#include "ldgba/pomdp/rng.hpp"

namespace ldgba::pomdp {

using logic::AtomSet;
using logic::Symbol;

inline constexpr double kStochasticTolerance = 1e-9;

struct Outcome {
  std::uint32_t next;
  double prob;
  double reward = 0.0;
};

struct Weighted {
  std::uint32_t index;
  double prob;
};

struct LabelProb {
  Symbol label;
  double prob;
};

struct EnvStep {
  std::uint32_t next;
  std::uint32_t observation;
  Symbol label;
  double reward;
};

/// PL-POMDP with sparse rows. Row (s, a) lists the successors with positive
/// probability in increasing state order; sampling walks rows in that order.
class PlPomdp {
 public:
  PlPomdp() = default;
  PlPomdp(std::size_t states, std::vector<std::string> action_names, std::vector<std::string> observation_names,
          AtomSet atoms)
      : states_(states),
        actions_(std::move(action_names)),
        observations_(std::move(observation_names)),
        atoms_(std::move(atoms)),
        available_(states * actions_.size(), true),
        transitions_(states * actions_.size()),
        observe_(states * actions_.size()),
        labels_(states, std::vector<LabelProb>{{Symbol{}, 1.0}}) {}

  std::size_t state_count() const { return states_; }
  std::size_t action_count() const { return actions_.size(); }
  std::size_t observation_count() const { return observations_.size(); }
  const std::vector<std::string>& action_names() const { return actions_; }
  const std::vector<std::string>& observation_names() const { return observations_; }
  const AtomSet& atoms() const { return atoms_; }
  std::uint32_t initial() const { return initial_; }
  void set_initial(std::uint32_t s) { initial_ = check_state(s); }

  bool available(std::uint32_t s, std::uint32_t a) const { return available_.at(slot(s, a)); }
  void set_available(std::uint32_t s, std::uint32_t a, bool on) { available_.at(slot(s, a)) = on; }
  std::vector<std::uint32_t> available_actions(std::uint32_t s) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < action_count(); ++a)
      if (available(s, a)) out.push_back(a);
    return out;
  }

  const std::vector<Outcome>& transitions(std::uint32_t s, std::uint32_t a) const { return transitions_.at(slot(s, a)); }
  void set_transitions(std::uint32_t s, std::uint32_t a, std::vector<Outcome> row) {
    transitions_.at(slot(s, a)) = std::move(row);
  }

  /// Observation distribution after arriving in `next` through action `a`.
  const std::vector<Weighted>& observations(std::uint32_t next, std::uint32_t a) const {
    return observe_.at(slot(next, a));
  }
  void set_observations(std::uint32_t next, std::uint32_t a, std::vector<Weighted> row) {
    observe_.at(slot(next, a)) = std::move(row);
  }

  const std::vector<LabelProb>& label_distribution(std::uint32_t s) const { return labels_.at(check_state(s)); }
  void set_labels(std::uint32_t s, std::vector<LabelProb> dist) { labels_.at(check_state(s)) = std::move(dist); }

  double transition_prob(std::uint32_t s, std::uint32_t a, std::uint32_t next) const {
    for (const auto& o : transitions(s, a))
      if (o.next == next) return o.prob;
    return 0.0;
  }

  EnvStep step(std::uint32_t s, std::uint32_t a, Rng& rng) const {
    const Outcome& out = sample_transition(s, a, rng);
    const std::uint32_t o = sample_observation(out.next, a, rng);
    return {out.next, o, sample_label(out.next, rng), out.reward};
  }

  // The three stages of step(), for callers that adjust the successor
  // before observing it (joint moves with collisions).
  const Outcome& sample_transition(std::uint32_t s, std::uint32_t a, Rng& rng) const {
    if (!available(s, a))
      throw std::invalid_argument("action " + std::to_string(a) + " unavailable in state " + std::to_string(s));
    const auto& row = transitions(s, a);
    return row[sample(row, rng.uniform(Stream::Transition))];
  }
  std::uint32_t sample_observation(std::uint32_t next, std::uint32_t a, Rng& rng) const {
    const auto& orow = observations(next, a);
    return orow[sample(orow, rng.uniform(Stream::Observation))].index;
  }
  Symbol sample_label(std::uint32_t next, Rng& rng) const {
    const auto& lrow = labels_.at(check_state(next));
    return lrow.size() == 1 ? lrow[0].label : lrow[sample(lrow, rng.uniform(Stream::Label))].label;
  }

  /// Inverse-CDF pick over the row order; trailing rounding mass goes to the
  /// last entry with positive probability.
  template <class Row>
  static std::size_t sample(const Row& row, double u) {
    if (row.empty()) throw std::logic_error("sampling from an empty row");
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].prob <= 0.0) continue;
      cum += row[i].prob;
      last = i;
      if (u < cum) return i;
    }
    return last;
  }

 private:
  std::uint32_t check_state(std::uint32_t s) const {
    if (s >= states_) throw std::out_of_range("state " + std::to_string(s) + " out of range");
    return s;
  }
  std::size_t slot(std::uint32_t s, std::uint32_t a) const {
    check_state(s);
    if (a >= actions_.size()) throw std::out_of_range("action " + std::to_string(a) + " out of range");
    return static_cast<std::size_t>(s) * actions_.size() + a;
  }

  std::size_t states_ = 0;
  std::vector<std::string> actions_;
  std::vector<std::string> observations_;
  AtomSet atoms_;
  std::uint32_t initial_ = 0;
  std::vector<bool> available_;
  std::vector<std::vector<Outcome>> transitions_;
  std::vector<std::vector<Weighted>> observe_;
  std::vector<std::vector<LabelProb>> labels_;
};

namespace detail {
template <class Row>
std::string check_row(const Row& row, std::size_t bound, const char* what) {
  double sum = 0.0;
  for (const auto& e : row) {
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) return std::string(what) + " has probability " + std::to_string(e.prob);
    sum += e.prob;
  }
  if constexpr (requires { row[0].next; }) {
    for (const auto& e : row)
      if (e.next >= bound) return std::string(what) + " targets unknown state " + std::to_string(e.next);
  } else if constexpr (requires { row[0].index; }) {
    for (const auto& e : row)
      if (e.index >= bound) return std::string(what) + " names unknown observation " + std::to_string(e.index);
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance) return std::string(what) + " sums to " + std::to_string(sum);
  return {};
}
}  // namespace detail

/// Stochasticity and range checks; one message per offending row.
inline std::vector<std::string> validate(const PlPomdp& m) {
  std::vector<std::string> out;
  const auto n = static_cast<std::uint32_t>(m.state_count());
  const auto na = static_cast<std::uint32_t>(m.action_count());
  if (n == 0) out.push_back("no states");
  if (na == 0) out.push_back("no actions");
  for (std::uint32_t s = 0; s < n; ++s) {
    bool any = false;
    for (std::uint32_t a = 0; a < na; ++a) {
      const std::string at = "(s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
      if (m.available(s, a)) {
        any = true;
        if (auto e = detail::check_row(m.transitions(s, a), n, ("transition row " + at).c_str()); !e.empty())
          out.push_back(e);
      }
      if (auto e = detail::check_row(m.observations(s, a), m.observation_count(),
                                     ("observation row (s'=" + std::to_string(s) + ", a=" + std::to_string(a) + ")").c_str());
          !e.empty())
        out.push_back(e);
    }
    if (!any) out.push_back("state " + std::to_string(s) + " has no available action");
    const auto& labels = m.label_distribution(s);
    double sum = 0.0;
    for (const auto& l : labels) {
      if (!(l.prob >= 0.0 && l.prob <= 1.0)) out.push_back("label probability out of range at s=" + std::to_string(s));
      if (l.label.bits >= m.atoms().symbol_count())
        out.push_back("label outside the atom set at s=" + std::to_string(s));
      sum += l.prob;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance)
      out.push_back("label distribution of s=" + std::to_string(s) + " sums to " + std::to_string(sum));
  }
  return out;
}

}  // namespace ldgba::pomdp
