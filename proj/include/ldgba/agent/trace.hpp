#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldgba/agent/learner.hpp"
#include "ldgba/automata/acceptance.hpp"

namespace ldgba::agent {

struct TraceStep {
  std::uint32_t s = 0;
  automata::StateId q = 0;
  std::uint32_t action = 0;
  bool epsilon = false;
  std::optional<std::uint32_t> observation;
  std::optional<logic::Symbol> label;  // over the trace's atoms
  double reward = 0.0;
  std::uint32_t next_s = 0;
  automata::StateId next_q = 0;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
  logic::AtomSet atoms;  // environment atoms the labels are written over
  std::vector<std::string> action_names;
  std::vector<TraceStep> steps;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Greedy run of a trained network (no random exploration), with the same
/// window mechanics as training: random warm-up until the observation
/// window is full, epsilon moves by the epsilon-transition policy.
inline Trace rollout(const Product& p, const QNet& net, const TrainConfig& cfg, std::uint32_t start, std::uint64_t steps,
                     Rng& rng, bool stop_on_trap = false) {
  Trace t{p.pomdp().atoms(), p.pomdp().action_names(), {}};
  const QNetShape& shape = net.shape();
  if (shape.actions != p.env_action_count() || shape.obs_vocab != p.pomdp().observation_count() ||
      shape.task_vocab != task_vocab(p, cfg.mode) || shape.task_len != cfg.task_window ||
      (shape.arch == neural::Architecture::Dense && shape.obs_len != cfg.obs_window))
    throw std::invalid_argument("network does not match this environment, task and window settings");
  ProductState x{start, p.automaton().initial()};
  HistoryWindows w = fresh_windows(p, cfg);
  bool eps_taken = false;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const auto task = w.task_sequence(shape.task_vocab);
    const std::uint32_t act = select_action(p, net, w, task, x, 0.0, eps_taken, cfg.p_epsilon, rng);
    const ProductStep st = p.step(x, act, rng);
    observe_transition(w, st, cfg.mode);
    eps_taken |= st.was_epsilon;
    t.steps.push_back({x.s, x.q, act, st.was_epsilon, st.observation, st.label, st.reward, st.next.s, st.next.q});
    x = st.next;
    if (stop_on_trap && p.trap(x.q)) break;
  }
  return t;
}

struct TraceVerdict {
  std::size_t length = 0;             // environment moves
  std::vector<std::size_t> set_visits;  // per acceptance set
  std::size_t accepting_visits = 0;   // moves into any accepting state
  bool trap = false;
  std::optional<bool> lasso;          // when periodised
};

class TraceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Replays the trace's label word through the automaton (epsilon moves as
/// recorded) and reports acceptance-set visits and trap entry. With
/// `cycle_len`, the last cycle_len labels are repeated forever and the
/// lasso is checked for acceptance.
inline TraceVerdict check_trace(const Trace& t, const automata::Ldgba& a, std::optional<std::size_t> cycle_len = {}) {
  if (!a.atoms().is_subset_of(t.atoms)) throw TraceError("automaton atoms are not a subset of the trace's atoms");
  const logic::SymbolProjection project(t.atoms, a.atoms());
  const auto trap = a.trap_states();
  TraceVerdict v;
  v.set_visits.assign(a.acceptance_set_count(), 0);
  automata::StateId q = a.initial();
  v.trap = trap[q];
  logic::LassoWord word;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TraceStep& st = t.steps[i];
    if (st.epsilon) {
      const auto eps = a.epsilon_successors(q);
      if (std::find(eps.begin(), eps.end(), st.next_q) == eps.end())
        throw TraceError("step " + std::to_string(i) + ": no epsilon edge q" + std::to_string(q) + " -> q" +
                         std::to_string(st.next_q));
      q = st.next_q;
    } else {
      if (!st.label) throw TraceError("step " + std::to_string(i) + " has no label");
      const logic::Symbol l = project(*st.label);
      word.prefix.push_back(l);
      q = a.step(q, l);
      ++v.length;
      const std::uint32_t mask = a.acceptance_mask(q);
      if (mask) ++v.accepting_visits;
      for (std::size_t k = 0; k < v.set_visits.size(); ++k)
        if (mask & (1u << k)) ++v.set_visits[k];
    }
    v.trap |= trap[q];
  }
  if (cycle_len) {
    if (*cycle_len == 0 || *cycle_len > word.prefix.size())
      throw TraceError("periodised suffix must hold between 1 and " + std::to_string(word.prefix.size()) + " labels");
    word.cycle.assign(word.prefix.end() - static_cast<std::ptrdiff_t>(*cycle_len), word.prefix.end());
    word.prefix.resize(word.prefix.size() - *cycle_len);
    v.lasso = automata::accepts_lasso(a, word);
  }
  return v;
}

// JSON lines: one header object {"atoms": [...], "actions": [...]}, then one
// object per step.
inline void write_trace(std::ostream& out, const Trace& t) {
  nlohmann::json header{{"atoms", t.atoms.names()}, {"actions", t.action_names}};
  out << header.dump() << '\n';
  for (const auto& st : t.steps) {
    nlohmann::json j;
    j["s"] = st.s;
    j["q"] = st.q;
    j["action"] = st.epsilon ? "eps" : t.action_names.at(st.action);
    j["action_index"] = st.action;
    j["observation"] = st.observation ? nlohmann::json(*st.observation) : nlohmann::json(nullptr);
    j["label"] = st.label ? nlohmann::json(t.atoms.atoms_of(*st.label)) : nlohmann::json(nullptr);
    j["reward"] = st.reward;
    j["next_s"] = st.next_s;
    j["next_q"] = st.next_q;
    out << j.dump() << '\n';
  }
}

inline Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!header) {
        t.atoms = logic::AtomSet(j.at("atoms").get<std::vector<std::string>>());
        t.action_names = j.at("actions").get<std::vector<std::string>>();
        header = true;
        continue;
      }
      TraceStep st;
      st.s = j.at("s").get<std::uint32_t>();
      st.q = j.at("q").get<automata::StateId>();
      st.action = j.at("action_index").get<std::uint32_t>();
      st.epsilon = j.at("action").get<std::string>() == "eps";
      if (!j.at("observation").is_null()) st.observation = j.at("observation").get<std::uint32_t>();
      if (!j.at("label").is_null()) st.label = t.atoms.symbol_of(j.at("label").get<std::vector<std::string>>());
      st.reward = j.at("reward").get<double>();
      st.next_s = j.at("next_s").get<std::uint32_t>();
      st.next_q = j.at("next_q").get<automata::StateId>();
      t.steps.push_back(st);
    } catch (const nlohmann::json::exception& e) {
      throw TraceError("trace line " + std::to_string(n) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw TraceError("trace line " + std::to_string(n) + ": " + e.what());
    }
  }
  if (!header) throw TraceError("trace has no header line");
  return t;
}

}  // namespace ldgba::agent
