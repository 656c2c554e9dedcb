#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "ldgba/agent/config.hpp"
#include "ldgba/agent/replay.hpp"
#include "ldgba/agent/windows.hpp"
#include "ldgba/neural/fit.hpp"
#include "ldgba/product/product.hpp"

namespace ldgba::agent {

using neural::QNet;
using neural::QNetShape;
using pomdp::Rng;
using pomdp::Stream;
using product::Product;
using product::ProductState;
using product::ProductStep;

struct EpisodeMetrics {
  std::uint64_t episode = 0;
  double acc_reward = 0.0;
  std::uint64_t accepting_visits = 0;
  bool trap = false;
  std::uint64_t steps = 0;
  double mean_loss = std::numeric_limits<double>::quiet_NaN();  // NaN when no fit ran
};

/// Vocabulary of the task window: automaton states, or every label symbol.
inline std::size_t task_vocab(const Product& p, TaskMode mode) {
  return mode == TaskMode::Aware ? p.automaton().size() : p.pomdp().atoms().symbol_count();
}

/// Network shape for a product; `task_streams` = 2 when the other agent's
/// task FIFO is appended (two-agent mode).
inline QNetShape network_shape(const Product& p, const TrainConfig& cfg, std::size_t task_streams = 1) {
  QNetShape s;
  s.arch = cfg.network == Network::Lstm ? neural::Architecture::TwinLstm : neural::Architecture::Dense;
  s.obs_vocab = p.pomdp().observation_count();
  s.task_vocab = task_vocab(p, cfg.mode);
  s.obs_hidden = cfg.obs_hidden;
  s.task_hidden = cfg.task_hidden;
  s.actions = p.env_action_count();
  s.obs_len = cfg.obs_window;
  s.task_len = cfg.task_window * task_streams;
  return s;
}

inline HistoryWindows fresh_windows(const Product& p, const TrainConfig& cfg) {
  const std::int32_t initial = cfg.mode == TaskMode::Aware ? static_cast<std::int32_t>(p.automaton().initial()) : 0;
  return HistoryWindows(cfg.obs_window, cfg.task_window, initial);
}

/// Records one product step in the windows. Epsilon moves change only the
/// task FIFO (aware mode); labels enter the FIFO only when non-empty.
inline void observe_transition(HistoryWindows& w, const ProductStep& st, TaskMode mode) {
  if (st.was_epsilon) {
    if (mode == TaskMode::Aware) w.push_task(static_cast<std::int32_t>(st.next.q));
    return;
  }
  w.push_observation(*st.observation);
  if (mode == TaskMode::Aware) w.push_task(static_cast<std::int32_t>(st.next.q));
  else if (!st.label->empty()) w.push_task(static_cast<std::int32_t>(st.label->bits));
}

/// Lowest-index best environment action among those available at s.
inline std::uint32_t greedy_action(const Product& p, std::uint32_t s, const neural::Vec& q) {
  std::uint32_t best = 0;
  double v = -std::numeric_limits<double>::infinity();
  for (std::uint32_t a : p.pomdp().available_actions(s))
    if (q[a] > v) {
      v = q[a];
      best = a;
    }
  return best;
}

inline std::uint32_t random_env_action(const Product& p, std::uint32_t s, Rng& rng) {
  const auto acts = p.pomdp().available_actions(s);
  return acts[rng.index(Stream::Exploration, acts.size())];
}

/// Epsilon-transition policy: while in the nondeterministic part and no
/// epsilon move has been taken this episode, jump with probability p_eps.
inline std::optional<std::uint32_t> maybe_epsilon(const Product& p, ProductState x, bool taken, double p_eps,
                                                  Rng& rng) {
  const auto edges = p.automaton().epsilon_successors(x.q);
  if (taken || edges.empty() || !rng.bernoulli(Stream::Exploration, p_eps)) return std::nullopt;
  return p.env_action_count() + static_cast<std::uint32_t>(rng.index(Stream::Exploration, edges.size()));
}

/// Warm-up actions are random until the observation window is full, then
/// epsilon-greedy on the network given (which is the target network during
/// training). `task` is the full task input (own FIFO, plus the other agent's).
inline std::uint32_t select_action(const Product& p, const QNet& net, const HistoryWindows& w,
                                   const neural::Sequence& task, ProductState x, double explore, bool eps_taken,
                                   double p_eps, Rng& rng) {
  if (auto e = maybe_epsilon(p, x, eps_taken, p_eps, rng)) return *e;
  if (!w.obs_full()) return random_env_action(p, x.s, rng);
  if (explore > 0.0 && rng.bernoulli(Stream::Exploration, explore)) return random_env_action(p, x.s, rng);
  return greedy_action(p, x.s, net.forward(w.obs_sequence(net.shape().obs_vocab), task));
}

/// Evaluation and target networks with their optimizer and replay memory.
class Learner {
 public:
  Learner(const QNetShape& shape, const TrainConfig& cfg, Rng& rng)
      : cfg_(cfg),
        eval_(QNet::random(shape, rng)),
        target_(eval_),
        grad_(eval_.zeros_like()),
        opt_(cfg.optimizer == Optimizer::Adam ? neural::OptimizerKind::Adam : neural::OptimizerKind::Sgd, cfg.alpha),
        memory_(cfg.replay) {}

  const QNet& eval() const { return eval_; }
  const QNet& target() const { return target_; }
  ReplayMemory& memory() { return memory_; }
  const ReplayMemory& memory() const { return memory_; }
  void sync() { target_ = eval_; }

  /// One fit of the evaluation network on M sampled experiences against
  /// scale * r + gamma * max_a Q_T(next); nullopt when memory holds fewer than M.
  std::optional<double> train_step(Rng& rng) {
    if (memory_.size() < cfg_.batch) return std::nullopt;
    batch_.resize(cfg_.batch);
    const auto idx = memory_.sample(cfg_.batch, rng);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const Experience& e = memory_.at(idx[b]);
      double y = e.reward * cfg_.reward_scale;
      if (!e.terminal && cfg_.gamma > 0.0) {
        const neural::Vec qn = target_.forward(e.next_obs, e.next_task);
        y += cfg_.gamma * *std::max_element(qn.begin(), qn.end());
      }
      batch_[b].obs = e.obs;
      batch_[b].task = e.task;
      batch_[b].action = e.action;
      batch_[b].target = y;
    }
    return neural::mse_fit(eval_, batch_, opt_, grad_);
  }

  /// Cadence from the config: every M-th step (i > 0), or every step.
  bool fit_due(std::uint64_t i) const {
    return cfg_.cadence == FitCadence::EveryStep || (i > 0 && i % cfg_.batch == 0);
  }
  bool sync_due(std::uint64_t i) const { return i > 0 && i % cfg_.sync == 0; }

 private:
  TrainConfig cfg_;
  QNet eval_, target_, grad_;
  neural::Optimizer opt_;
  ReplayMemory memory_;
  std::vector<neural::FitSample> batch_;
};

struct TrainResult {
  QNet net;
  std::vector<EpisodeMetrics> metrics;
};

using EpisodeSink = std::function<void(const EpisodeMetrics&)>;

/// Deep recurrent Q-learning on the product. Each episode starts from a
/// uniformly chosen entry of `starts` paired with the automaton's initial
/// state and ends after cfg.steps steps or on entering an automaton trap.
inline TrainResult run_training(const Product& p, const TrainConfig& cfg, const std::vector<std::uint32_t>& starts,
                                const EpisodeSink& sink = {}) {
  cfg.check();
  if (starts.empty()) throw std::invalid_argument("no start states");
  Rng rng(cfg.seed);
  const QNetShape shape = network_shape(p, cfg);
  Learner learner(shape, cfg, rng);
  TrainResult result;
  result.metrics.reserve(cfg.episodes);
  for (std::uint64_t ep = 0; ep < cfg.episodes; ++ep) {
    const double explore = cfg.epsilon_at(ep);
    ProductState x{starts[rng.index(Stream::Init, starts.size())], p.automaton().initial()};
    HistoryWindows w = fresh_windows(p, cfg);
    bool eps_taken = false;
    EpisodeMetrics m;
    m.episode = ep;
    double loss_sum = 0.0;
    std::size_t fits = 0;
    // The network never chooses epsilon moves, so for it they are part of
    // the dynamics: an experience is stored once the next decision point is
    // known, with the task window as it stands there.
    std::optional<Experience> pending;
    auto flush = [&] {
      if (!pending) return;
      pending->next_task = w.task_sequence(shape.task_vocab);
      learner.memory().push(std::move(*pending));
      pending.reset();
    };
    for (std::uint64_t i = 0; i < cfg.steps; ++i) {
      const neural::Sequence task = w.task_sequence(shape.task_vocab);
      const std::uint32_t act = select_action(p, learner.target(), w, task, x, explore, eps_taken, cfg.p_epsilon, rng);
      if (!p.is_epsilon(act)) flush();
      std::optional<neural::Sequence> before_obs;
      if (w.obs_full()) before_obs = w.obs_sequence(shape.obs_vocab);
      const ProductStep st = p.step(x, act, rng);
      observe_transition(w, st, cfg.mode);
      ++m.steps;
      if (st.was_epsilon) {
        eps_taken = true;
      } else {
        m.acc_reward += st.reward;
        if (p.automaton().accepting(st.next.q)) ++m.accepting_visits;
        if (before_obs && w.obs_full()) {
          pending = Experience{std::move(*before_obs), task, act, st.reward, w.obs_sequence(shape.obs_vocab), {},
                               p.trap(st.next.q)};
          if (pending->terminal) flush();
        }
      }
      x = st.next;
      if (learner.fit_due(i))
        if (auto loss = learner.train_step(rng)) {
          loss_sum += *loss;
          ++fits;
        }
      if (learner.sync_due(i)) learner.sync();
      if (p.trap(x.q)) {
        m.trap = true;
        break;
      }
    }
    flush();
    if (fits > 0) m.mean_loss = loss_sum / static_cast<double>(fits);
    if (sink) sink(m);
    result.metrics.push_back(m);
  }
  result.net = learner.eval();
  return result;
}

}  // namespace ldgba::agent
