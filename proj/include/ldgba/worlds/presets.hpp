#pragma once

// Built-in environments. Cell coordinates are approximate reconstructions;
// tests only rely on structural properties.

#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/translate/registry.hpp"
#include "ldgba/worlds/env_file.hpp"

namespace ldgba::worlds {

struct World {
  GridSpec spec;
  PlPomdp pomdp;
  automata::Ldgba automaton;
};

/// Builds the environment and its registry task automaton; the task's atoms
/// must all be declared by the environment.
inline World make_world(const GridSpec& spec) {
  World w{spec, build_grid(spec), translate::task_automaton(spec.task)};
  if (!w.automaton.atoms().is_subset_of(w.pomdp.atoms()))
    throw std::invalid_argument(spec.name + ": task '" + spec.task + "' uses atoms the environment does not declare");
  return w;
}

namespace detail {

inline void fill(std::vector<Cell>& out, int x0, int y0, int x1, int y1) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) out.push_back({x, y});
}

inline void label_cells(GridSpec& g, const std::vector<Cell>& cells, std::vector<LabelChoice> dist) {
  for (Cell c : cells) g.labels[c] = dist;
}

inline agent::TrainConfig default_grid_config() {
  agent::TrainConfig c;
  c.episodes = 15000;
  c.steps = 600;
  c.obs_window = 5;
  c.task_window = 3;
  c.batch = 32;
  c.sync = 50;
  c.gamma = 0.98;
  return c;
}

// Shared 10x10 layout of the trap-state experiments: 'a' bottom left,
// 'b' top right, trap clusters in between.
inline GridSpec trap_grid(const std::string& name, const std::string& task) {
  GridSpec g;
  g.name = name;
  g.note = "approximate layout";
  g.width = g.height = 10;
  g.atoms = {"a", "b", "c"};
  g.task = task;
  fill(g.traps, 4, 4, 5, 5);
  g.traps.push_back({2, 2});
  g.traps.push_back({7, 7});
  g.traps.push_back({1, 5});
  g.traps.push_back({8, 4});
  std::sort(g.traps.begin(), g.traps.end());
  for (Cell c : g.traps) g.labels[c] = {{{"c"}, 1.0}};
  std::vector<Cell> a, b;
  fill(a, 0, 8, 1, 9);
  fill(b, 8, 0, 9, 1);
  label_cells(g, a, {{{"a"}, 1.0}});
  label_cells(g, b, {{{"b"}, 1.0}});
  g.train = default_grid_config();
  return g;
}

// Office floor on a 4x4 grid. Sides are listed North, West, South, East.
inline std::map<Cell, std::array<std::string, 4>> office_sides(bool extra_items) {
  std::map<Cell, std::array<std::string, 4>> s = {
      {{0, 0}, {"window", "wall", "door", "wall"}},     // office a
      {{1, 0}, {"wall", "wall", "hallway", "hallway"}},
      {{2, 0}, {"wall", "hallway", "hallway", "wall"}},
      {{3, 0}, {"window", "wall", "door", "wall"}},     // office d
      {{0, 1}, {"door", "wall", "wall", "hallway"}},
      {{1, 1}, {"hallway", "hallway", "hallway", "hallway"}},
      {{2, 1}, {"hallway", "hallway", "door", "hallway"}},
      {{3, 1}, {"door", "hallway", "door", "wall"}},
      {{0, 2}, {"wall", "wall", "wall", "door"}},       // office b
      {{1, 2}, {"hallway", "door", "hallway", "wall"}},
      {{2, 2}, {"door", "wall", "wall", "wall"}},       // printer room
      {{3, 2}, {"door", "wall", "wall", "wall"}},       // storage
      {{0, 3}, {"wall", "wall", "wall", "door"}},       // office c
      {{1, 3}, {"hallway", "door", "wall", "door"}},
      {{2, 3}, {"wall", "door", "wall", "wall"}},       // supply station
      {{3, 3}, {"wall", "wall", "wall", "wall"}},       // closed off
  };
  if (extra_items) {
    s[{0, 2}][1] = "table";
    s[{0, 3}][1] = "table";
    s[{1, 0}][0] = "paint";
    s[{2, 0}][3] = "flower";
  }
  return s;
}

inline GridSpec office(const std::string& name, bool single_obs) {
  GridSpec g;
  g.name = name;
  g.note = "approximate layout";
  g.width = g.height = 4;
  g.atoms = {"Print", "S", "Sply", "a", "c"};
  g.noise = Noise::UniformSlip;
  g.observation = single_obs ? ObservationModel::SingleSide : ObservationModel::Sides;
  g.task = "office_task1";
  g.starts = {{0, 2}};
  g.blocked = {{3, 3}};
  g.labels[{0, 0}] = {{{"a"}, 1.0}};
  g.labels[{0, 3}] = {{{"c"}, 1.0}};
  g.labels[{2, 2}] = {{{"Print"}, 1.0}};
  g.labels[{3, 2}] = {{{"S"}, 1.0}};
  g.labels[{2, 3}] = {{{"Sply"}, 1.0}};
  g.sides = office_sides(single_obs);
  g.train = default_grid_config();
  g.train.episodes = 10000;
  g.train.steps = 300;
  return g;
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"go_to_goal_10x10", "grid_phi1",       "grid_phi2_static",
                                                 "grid_phi2_dynamic", "office_full_obs", "office_single_obs",
                                                 "warehouse_2agent"};
  return names;
}

inline GridSpec preset_spec(const std::string& name) {
  if (name == "go_to_goal_10x10") {
    GridSpec g;
    g.name = name;
    g.note = "approximate layout";
    g.width = g.height = 10;
    g.atoms = {"a", "b"};
    g.task = "go_to_goal";
    g.starts = {{1, 8}};
    detail::fill(g.blocked, 3, 1, 3, 5);
    detail::fill(g.blocked, 6, 4, 6, 8);
    std::sort(g.blocked.begin(), g.blocked.end());
    g.labels[{1, 8}] = {{{"a"}, 1.0}};
    g.labels[{8, 1}] = {{{"b"}, 1.0}};
    g.train.episodes = 1000;
    g.train.steps = 500;
    g.train.obs_window = 5;
    g.train.task_window = 1;
    g.train.batch = 32;
    g.train.sync = 50;
    g.train.gamma = 0.98;
    return g;
  }
  if (name == "grid_phi1") return detail::trap_grid(name, "grid_phi1");
  if (name == "grid_phi2_static" || name == "grid_phi2_dynamic") {
    GridSpec g = detail::trap_grid(name, "grid_phi2");
    g.train.reward = product::RewardMode::Redesigned;
    if (name == "grid_phi2_dynamic") {
      for (auto& [c, dist] : g.labels) {
        if (dist[0].atoms == std::vector<std::string>{"a"}) dist = {{{"a"}, 0.9}, {{"b"}, 0.1}};
        else if (dist[0].atoms == std::vector<std::string>{"b"}) dist = {{{"a"}, 0.1}, {{"b"}, 0.9}};
      }
    }
    return g;
  }
  if (name == "office_full_obs") return detail::office(name, false);
  if (name == "office_single_obs") return detail::office(name, true);
  if (name == "warehouse_2agent") {
    GridSpec g;
    g.name = name;
    g.note = "approximate layout";
    g.width = g.height = 8;
    g.atoms = {"a", "b"};
    g.stay_action = true;
    g.task = "warehouse_phi";
    g.starts = {{0, 7}, {7, 0}};
    detail::fill(g.blocked, 2, 2, 2, 4);
    detail::fill(g.blocked, 5, 3, 5, 5);
    detail::fill(g.blocked, 3, 6, 4, 6);
    std::sort(g.blocked.begin(), g.blocked.end());
    std::vector<Cell> a, b;
    detail::fill(a, 0, 0, 1, 0);
    detail::fill(b, 7, 6, 7, 7);
    detail::label_cells(g, a, {{{"a"}, 1.0}});
    detail::label_cells(g, b, {{{"b"}, 1.0}});
    g.train = detail::default_grid_config();
    g.train.episodes = 30000;
    g.train.steps = 300;
    return g;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

inline World preset(const std::string& name) { return make_world(preset_spec(name)); }

}  // namespace ldgba::worlds
