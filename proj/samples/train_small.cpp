// Trains on a small fully observable grid and compares the result with
// value iteration on the explicit product.
#include <iostream>

#include "ldgba/agent/compare.hpp"
#include "ldgba/agent/learner.hpp"
#include "ldgba/worlds/presets.hpp"

int main() {
  using namespace ldgba;
  worlds::GridSpec g;
  g.name = "phi1_5x5";
  g.width = g.height = 5;
  g.atoms = {"a", "b", "c"};
  g.task = "grid_phi1";
  g.observation = worlds::ObservationModel::Exact;
  g.traps = {{2, 2}};
  g.labels[{2, 2}] = {{{"c"}, 1.0}};
  g.labels[{0, 4}] = {{{"a"}, 1.0}};
  g.labels[{4, 0}] = {{{"b"}, 1.0}};
  const auto w = worlds::make_world(g);

  agent::TrainConfig c;
  c.episodes = 400;
  c.steps = 100;
  c.obs_window = c.task_window = 1;
  c.gamma = 0.9;
  c.p_epsilon = 0.2;
  c.optimizer = agent::Optimizer::Adam;
  c.cadence = agent::FitCadence::EveryStep;
  c.seed = 7;
  const product::Product p(w.pomdp, w.automaton, c.reward, c.base_reward);
  const auto starts = worlds::start_states(w.spec);
  const auto r = agent::run_training(p, c, starts, [](const agent::EpisodeMetrics& m) {
    if ((m.episode + 1) % 50 == 0) std::cout << "episode " << m.episode + 1 << " reward " << m.acc_reward << "\n";
  });

  const auto e = product::enumerate_explicit(p);
  const auto q = product::value_iteration(e, c.gamma);
  const auto cmp = agent::compare_policy(p, r.net, e, q, starts, true);
  std::cout << "agreement with value iteration " << cmp.agree << "/" << cmp.states << "\n";
}
