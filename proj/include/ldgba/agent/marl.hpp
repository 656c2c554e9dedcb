#pragma once

#include <array>

#include "ldgba/agent/trace.hpp"

namespace ldgba::agent {

using Pair = std::array<std::uint32_t, 2>;

/// Resolves simultaneous moves from cells `from` towards cells `to`.
/// Agent 0 has priority: agent 1 stays when it would enter agent 0's
/// target or swap places with it; agent 0 stays when its target is where
/// agent 1 remains. Applied until nothing changes.
inline Pair resolve_collisions(Pair from, Pair to, std::array<bool, 2>* blocked = nullptr) {
  std::array<bool, 2> stopped{false, false};
  for (bool changed = true; changed;) {
    changed = false;
    if (to[1] != from[1] && (to[1] == to[0] || (to[1] == from[0] && to[0] == from[1]))) {
      to[1] = from[1];
      stopped[1] = changed = true;
    }
    if (to[0] != from[0] && to[0] == to[1]) {
      to[0] = from[0];
      stopped[0] = changed = true;
    }
  }
  if (blocked) *blocked = stopped;
  return to;
}

struct JointStep {
  std::array<ProductStep, 2> steps;
  std::array<bool, 2> blocked{false, false};
};

/// Two agents in one PL-POMDP, each tracking its own copy of the task
/// automaton.
class JointWorld {
 public:
  JointWorld(const Product& p) : p_(&p) {}

  const Product& product() const { return *p_; }

  JointStep step(std::array<ProductState, 2> x, Pair act, Rng& rng) const {
    const Product& p = *p_;
    JointStep out;
    Pair from{x[0].s, x[1].s}, to = from;
    for (int k = 0; k < 2; ++k) {
      if (!p.available(x[k], act[k])) throw std::invalid_argument("agent " + std::to_string(k) + ": action unavailable");
      if (!p.is_epsilon(act[k])) to[k] = p.pomdp().sample_transition(from[k], act[k], rng).next;
    }
    to = resolve_collisions(from, to, &out.blocked);
    for (int k = 0; k < 2; ++k) {
      ProductStep& st = out.steps[k];
      if (p.is_epsilon(act[k])) {
        st.next = {x[k].s, p.epsilon_target(x[k], act[k])};
        st.was_epsilon = true;
        continue;
      }
      st.observation = p.pomdp().sample_observation(to[k], act[k], rng);
      st.label = p.pomdp().sample_label(to[k], rng);
      st.next = {to[k], p.advance(x[k].q, *st.label)};
      st.reward = p.reward(x[k], act[k], st.next);
    }
    return out;
  }

 private:
  const Product* p_;
};

struct MarlEpisode {
  std::array<EpisodeMetrics, 2> agents;
  std::uint64_t blocked_moves = 0;
};

struct MarlOptions {
  Pair starts{0, 1};
  bool freeze_second = false;  // agent 1 always takes `stay_action` and never learns
  std::uint32_t stay_action = 4;
};

struct MarlResult {
  std::array<QNet, 2> nets;
  std::vector<MarlEpisode> metrics;
};

/// Own task FIFO followed by the other agent's.
inline neural::Sequence joint_task(const HistoryWindows& own, const HistoryWindows& other, std::size_t vocab) {
  neural::Sequence s{vocab, {}};
  own.append_task(s);
  other.append_task(s);
  return s;
}

inline Rng agent_rng(std::uint64_t seed, int k) {
  return Rng(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(k + 1));
}

/// Decentralised training: two independent learners, each seeing its own
/// observations, its own task FIFO and the other agent's task FIFO, and
/// rewarded for its own accepting transitions.
inline MarlResult marl_run_training(const Product& p, const TrainConfig& cfg, const MarlOptions& opt,
                                    const std::function<void(const MarlEpisode&)>& sink = {}) {
  cfg.check();
  if (cfg.mode != TaskMode::Aware) throw ConfigError("two-agent training is task-aware only");
  if (opt.starts[0] == opt.starts[1]) throw std::invalid_argument("agents share a start cell");
  const JointWorld world(p);
  Rng env(cfg.seed);
  std::array<Rng, 2> rng{agent_rng(cfg.seed, 0), agent_rng(cfg.seed, 1)};
  const QNetShape shape = network_shape(p, cfg, 2);
  std::array<Learner, 2> learners{Learner(shape, cfg, rng[0]), Learner(shape, cfg, rng[1])};
  MarlResult result;
  for (std::uint64_t ep = 0; ep < cfg.episodes; ++ep) {
    const double explore = cfg.epsilon_at(ep);
    std::array<ProductState, 2> x{ProductState{opt.starts[0], p.automaton().initial()},
                                  ProductState{opt.starts[1], p.automaton().initial()}};
    std::array<HistoryWindows, 2> w{fresh_windows(p, cfg), fresh_windows(p, cfg)};
    std::array<bool, 2> eps_taken{false, false};
    MarlEpisode m;
    std::array<double, 2> loss_sum{0, 0};
    std::array<std::size_t, 2> fits{0, 0};
    for (int k = 0; k < 2; ++k) m.agents[k].episode = ep;
    for (std::uint64_t i = 0; i < cfg.steps; ++i) {
      std::array<neural::Sequence, 2> task{joint_task(w[0], w[1], shape.task_vocab),
                                           joint_task(w[1], w[0], shape.task_vocab)};
      Pair act;
      for (int k = 0; k < 2; ++k)
        act[k] = (k == 1 && opt.freeze_second)
                     ? opt.stay_action
                     : select_action(p, learners[k].target(), w[k], task[k], x[k], explore, eps_taken[k], cfg.p_epsilon,
                                     rng[k]);
      std::array<std::optional<neural::Sequence>, 2> before;
      for (int k = 0; k < 2; ++k)
        if (w[k].obs_full()) before[k] = w[k].obs_sequence(shape.obs_vocab);
      const JointStep js = world.step(x, act, env);
      m.blocked_moves += js.blocked[0] + js.blocked[1];
      for (int k = 0; k < 2; ++k) observe_transition(w[k], js.steps[k], cfg.mode);
      bool trapped = false;
      for (int k = 0; k < 2; ++k) {
        const ProductStep& st = js.steps[k];
        EpisodeMetrics& mk = m.agents[k];
        ++mk.steps;
        if (st.was_epsilon) {
          eps_taken[k] = true;
        } else {
          mk.acc_reward += st.reward;
          if (p.automaton().accepting(st.next.q)) ++mk.accepting_visits;
          const bool learns = !(k == 1 && opt.freeze_second);
          if (learns && before[k] && w[k].obs_full())
            learners[k].memory().push({std::move(*before[k]), task[k], act[k], st.reward,
                                       w[k].obs_sequence(shape.obs_vocab),
                                       joint_task(w[k], w[1 - k], shape.task_vocab), p.trap(st.next.q)});
        }
        x[k] = st.next;
        if (p.trap(x[k].q)) mk.trap = trapped = true;
      }
      for (int k = 0; k < 2; ++k) {
        if (k == 1 && opt.freeze_second) continue;
        if (learners[k].fit_due(i))
          if (auto loss = learners[k].train_step(rng[k])) {
            loss_sum[k] += *loss;
            ++fits[k];
          }
        if (learners[k].sync_due(i)) learners[k].sync();
      }
      if (trapped) break;
    }
    for (int k = 0; k < 2; ++k)
      if (fits[k] > 0) m.agents[k].mean_loss = loss_sum[k] / static_cast<double>(fits[k]);
    if (sink) sink(m);
    result.metrics.push_back(m);
  }
  result.nets = {learners[0].eval(), learners[1].eval()};
  return result;
}

struct JointTrace {
  std::array<Trace, 2> agents;
};

inline JointTrace marl_rollout(const Product& p, const std::array<QNet, 2>& nets, const TrainConfig& cfg, Pair starts,
                               std::uint64_t steps, Rng& env, std::array<Rng, 2>& rng) {
  const JointWorld world(p);
  JointTrace t;
  for (auto& a : t.agents) a = Trace{p.pomdp().atoms(), p.pomdp().action_names(), {}};
  const std::size_t vocab = task_vocab(p, TaskMode::Aware);
  for (const auto& n : nets)
    if (n.shape().task_len != 2 * cfg.task_window || n.shape().task_vocab != vocab ||
        n.shape().actions != p.env_action_count())
      throw std::invalid_argument("network does not match the two-agent task input");
  std::array<ProductState, 2> x{ProductState{starts[0], p.automaton().initial()},
                                ProductState{starts[1], p.automaton().initial()}};
  std::array<HistoryWindows, 2> w{fresh_windows(p, cfg), fresh_windows(p, cfg)};
  std::array<bool, 2> eps_taken{false, false};
  for (std::uint64_t i = 0; i < steps; ++i) {
    Pair act;
    for (int k = 0; k < 2; ++k)
      act[k] = select_action(p, nets[k], w[k], joint_task(w[k], w[1 - k], vocab), x[k], 0.0, eps_taken[k],
                             cfg.p_epsilon, rng[k]);
    const JointStep js = world.step(x, act, env);
    for (int k = 0; k < 2; ++k) {
      const ProductStep& st = js.steps[k];
      observe_transition(w[k], st, TaskMode::Aware);
      eps_taken[k] |= st.was_epsilon;
      t.agents[k].steps.push_back(
          {x[k].s, x[k].q, act[k], st.was_epsilon, st.observation, st.label, st.reward, st.next.s, st.next.q});
      x[k] = st.next;
    }
  }
  return t;
}

/// Steps at which both agents occupy the same cell.
inline std::size_t co_occupancy(const JointTrace& t) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(t.agents[0].steps.size(), t.agents[1].steps.size()); ++i)
    n += t.agents[0].steps[i].next_s == t.agents[1].steps[i].next_s;
  return n;
}

/// Completed first-then-second visits in the trace's label sequence.
inline std::size_t count_cycles(const Trace& t, const std::string& first, const std::string& second) {
  const std::size_t a = t.atoms.index_of(first), b = t.atoms.index_of(second);
  std::size_t cycles = 0;
  bool armed = false;
  for (const auto& st : t.steps) {
    if (!st.label) continue;
    if (!armed && st.label->has(a)) armed = true;
    else if (armed && st.label->has(b)) {
      ++cycles;
      armed = false;
    }
  }
  return cycles;
}

}  // namespace ldgba::agent
