#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/agent/config.hpp"
#include "ldgba/pomdp/pl_pomdp.hpp"

namespace ldgba::worlds {

using pomdp::PlPomdp;

/// Grid cell; y = 0 is the top row. State index is y * width + x.
struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

inline std::string to_string(Cell c) { return std::to_string(c.x) + "," + std::to_string(c.y); }

/// One possible label of a cell: the set of atoms that hold, with its probability.
struct LabelChoice {
  std::vector<std::string> atoms;  // sorted; empty = no atom holds
  double prob = 1.0;
  friend bool operator==(const LabelChoice&, const LabelChoice&) = default;
};

enum class Noise {
  SideSlip,     // 0.9 intended, 0.05 to each perpendicular direction
  UniformSlip,  // 0.9 intended, 0.1 shared by the other three directions
};

enum class ObservationModel {
  Neighbors,   // 0.9 the cell itself, 0.1 spread over its in-grid 4-neighbours
  Exact,       // the cell itself with probability 1
  Sides,       // the (N, W, S, E) tuple of side items, deterministic
  SingleSide,  // one of the four side items, uniformly
};

/// Side items; movement through a side is possible only for door and hallway.
inline const std::vector<std::string>& side_items() {
  static const std::vector<std::string> items = {"hallway", "wall", "door", "window", "table", "paint", "flower"};
  return items;
}

inline bool passable(const std::string& item) { return item == "door" || item == "hallway"; }

struct GridSpec {
  std::string name;
  std::string note;
  int width = 0;
  int height = 0;
  std::vector<std::string> atoms;
  bool stay_action = false;
  Noise noise = Noise::SideSlip;
  ObservationModel observation = ObservationModel::Neighbors;
  std::string task;
  std::vector<Cell> starts;  // empty = uniform over free cells; otherwise one per agent
  std::vector<Cell> blocked;
  std::vector<Cell> traps;
  std::map<Cell, std::vector<LabelChoice>> labels;
  std::map<Cell, std::array<std::string, 4>> sides;  // N, W, S, E
  agent::TrainConfig train;

  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  bool inside(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  std::uint32_t state_of(Cell c) const { return static_cast<std::uint32_t>(c.y * width + c.x); }
  Cell cell_of(std::uint32_t s) const { return {static_cast<int>(s) % width, static_cast<int>(s) / width}; }
  bool is_blocked(Cell c) const { return std::find(blocked.begin(), blocked.end(), c) != blocked.end(); }
  bool is_trap(Cell c) const { return std::find(traps.begin(), traps.end(), c) != traps.end(); }
  std::size_t agent_count() const { return starts.size() > 1 ? starts.size() : 1; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline const std::array<Cell, 4>& directions() {
  static const std::array<Cell, 4> d = {Cell{0, -1}, Cell{-1, 0}, Cell{0, 1}, Cell{1, 0}};  // up left down right
  return d;
}

inline std::vector<std::string> action_names(const GridSpec& g) {
  std::vector<std::string> out = {"up", "left", "down", "right"};
  if (g.stay_action) out.push_back("stay");
  return out;
}

/// Structural problems of a spec, each naming the offending cell or key.
inline std::vector<std::string> check(const GridSpec& g) {
  std::vector<std::string> out;
  if (g.width < 1 || g.height < 1 || g.width > 64 || g.height > 64) {
    out.push_back("grid dimensions must lie in [1, 64]");
    return out;
  }
  std::set<std::string> atoms(g.atoms.begin(), g.atoms.end());
  if (atoms.size() != g.atoms.size()) out.push_back("duplicate atom");
  for (const auto& a : g.atoms)
    if (!logic::is_identifier(a) || logic::is_reserved(a)) out.push_back("invalid atom name '" + a + "'");
  auto cell_ok = [&](Cell c, const char* what) {
    if (!g.inside(c)) {
      out.push_back(std::string(what) + " cell " + to_string(c) + " lies outside the grid");
      return false;
    }
    return true;
  };
  for (Cell c : g.blocked) cell_ok(c, "blocked");
  for (Cell c : g.traps) {
    if (cell_ok(c, "trap") && g.is_blocked(c)) out.push_back("cell " + to_string(c) + " is both blocked and a trap");
  }
  for (const auto& [c, dist] : g.labels) {
    if (!cell_ok(c, "labelled")) continue;
    if (g.is_blocked(c)) out.push_back("cell " + to_string(c) + " is both blocked and labelled");
    double sum = 0;
    for (const auto& l : dist) {
      sum += l.prob;
      if (!(l.prob > 0.0 && l.prob <= 1.0)) out.push_back("label probability out of range at " + to_string(c));
      for (const auto& a : l.atoms)
        if (!atoms.count(a)) out.push_back("cell " + to_string(c) + " uses undeclared atom '" + a + "'");
    }
    if (std::abs(sum - 1.0) > pomdp::kStochasticTolerance)
      out.push_back("label probabilities at " + to_string(c) + " sum to " + agent::format_double(sum));
  }
  for (Cell c : g.starts) {
    if (cell_ok(c, "start") && (g.is_blocked(c) || g.is_trap(c)))
      out.push_back("start cell " + to_string(c) + " is blocked or a trap");
  }
  if (g.starts.size() == 2 && g.starts[0] == g.starts[1]) out.push_back("agents share a start cell");
  if (g.starts.size() > 2) out.push_back("at most two agents are supported");
  const bool need_sides = g.observation == ObservationModel::Sides || g.observation == ObservationModel::SingleSide;
  for (const auto& [c, s] : g.sides) {
    if (!cell_ok(c, "sides")) continue;
    for (const auto& item : s)
      if (std::find(side_items().begin(), side_items().end(), item) == side_items().end())
        out.push_back("unknown side item '" + item + "' at " + to_string(c));
  }
  if (need_sides && g.sides.size() != g.cell_count()) out.push_back("side observations need a [sides] entry per cell");
  if (!need_sides && !g.sides.empty()) out.push_back("[sides] given but the observation model ignores it");
  for (const auto& p : g.train.problems()) out.push_back("train: " + p);
  return out;
}

namespace detail {

/// Cell reached by moving from `c` in direction `d`, or `c` itself when the
/// move leaves the grid, hits a blocked cell, or crosses an impassable side.
inline Cell move(const GridSpec& g, Cell c, int d) {
  if (!g.sides.empty() && !passable(g.sides.at(c)[static_cast<std::size_t>(d)])) return c;
  const Cell n{c.x + directions()[d].x, c.y + directions()[d].y};
  if (!g.inside(n) || g.is_blocked(n)) return c;
  return n;
}

inline std::vector<pomdp::Outcome> merge(std::map<std::uint32_t, double> mass) {
  std::vector<pomdp::Outcome> row;
  for (auto [s, p] : mass)
    if (p > 0) row.push_back({s, p, 0.0});
  return row;
}

}  // namespace detail

inline std::vector<std::string> observation_names(const GridSpec& g) {
  std::vector<std::string> out;
  switch (g.observation) {
    case ObservationModel::Neighbors:
    case ObservationModel::Exact:
      for (std::uint32_t s = 0; s < g.cell_count(); ++s) out.push_back(to_string(g.cell_of(s)));
      break;
    case ObservationModel::Sides:
      for (std::uint32_t s = 0; s < g.cell_count(); ++s) {
        const auto& t = g.sides.at(g.cell_of(s));
        const std::string name = t[0] + "/" + t[1] + "/" + t[2] + "/" + t[3];
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
      }
      break;
    case ObservationModel::SingleSide:
      for (const auto& item : side_items()) {
        bool used = false;
        for (const auto& [c, t] : g.sides) used |= std::find(t.begin(), t.end(), item) != t.end();
        if (used) out.push_back(item);
      }
      break;
  }
  return out;
}

inline logic::Symbol label_symbol(const logic::AtomSet& atoms, const LabelChoice& l) {
  return atoms.symbol_of(l.atoms);
}

/// States an episode may start from for agent 0: the fixed start, or every
/// cell that is neither blocked nor a trap.
inline std::vector<std::uint32_t> start_states(const GridSpec& g) {
  if (!g.starts.empty()) return {g.state_of(g.starts.front())};
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < g.cell_count(); ++s) {
    const Cell c = g.cell_of(s);
    if (!g.is_blocked(c) && !g.is_trap(c)) out.push_back(s);
  }
  return out;
}

/// Builds the PL-POMDP of a grid spec; throws std::invalid_argument listing
/// the first structural problem.
inline PlPomdp build_grid(const GridSpec& g) {
  if (auto p = check(g); !p.empty()) throw std::invalid_argument(g.name + ": " + p.front());
  const logic::AtomSet atoms(g.atoms);
  const auto actions = action_names(g);
  const auto obs_names = observation_names(g);
  PlPomdp m(g.cell_count(), actions, obs_names, atoms);
  const double intended = 0.9;

  for (std::uint32_t s = 0; s < g.cell_count(); ++s) {
    const Cell c = g.cell_of(s);
    for (std::uint32_t a = 0; a < actions.size(); ++a) {
      std::map<std::uint32_t, double> mass;
      if (g.is_trap(c) || a == 4) {
        mass[s] = 1.0;
      } else {
        const int d = static_cast<int>(a);
        mass[g.state_of(detail::move(g, c, d))] += intended;
        if (g.noise == Noise::SideSlip) {
          for (int side : {(d + 1) % 4, (d + 3) % 4}) mass[g.state_of(detail::move(g, c, side))] += (1 - intended) / 2;
        } else {
          for (int other = 0; other < 4; ++other)
            if (other != d) mass[g.state_of(detail::move(g, c, other))] += (1 - intended) / 3;
        }
      }
      m.set_transitions(s, a, detail::merge(std::move(mass)));
    }

    std::vector<pomdp::Weighted> orow;
    switch (g.observation) {
      case ObservationModel::Exact: orow = {{s, 1.0}}; break;
      case ObservationModel::Neighbors: {
        std::vector<std::uint32_t> nb;
        for (Cell d : directions()) {
          const Cell n{c.x + d.x, c.y + d.y};
          if (g.inside(n)) nb.push_back(g.state_of(n));
        }
        std::sort(nb.begin(), nb.end());
        std::map<std::uint32_t, double> mass;
        mass[s] = nb.empty() ? 1.0 : intended;
        for (auto n : nb) mass[n] += (1 - intended) / static_cast<double>(nb.size());
        for (auto [o, p] : mass) orow.push_back({o, p});
        break;
      }
      case ObservationModel::Sides: {
        const auto& t = g.sides.at(c);
        const std::string name = t[0] + "/" + t[1] + "/" + t[2] + "/" + t[3];
        const auto idx = std::find(obs_names.begin(), obs_names.end(), name) - obs_names.begin();
        orow = {{static_cast<std::uint32_t>(idx), 1.0}};
        break;
      }
      case ObservationModel::SingleSide: {
        std::map<std::uint32_t, double> mass;
        for (const auto& item : g.sides.at(c))
          mass[static_cast<std::uint32_t>(std::find(obs_names.begin(), obs_names.end(), item) - obs_names.begin())] += 0.25;
        for (auto [o, p] : mass) orow.push_back({o, p});
        break;
      }
    }
    for (std::uint32_t a = 0; a < actions.size(); ++a) m.set_observations(s, a, orow);

    if (auto it = g.labels.find(c); it != g.labels.end()) {
      std::vector<pomdp::LabelProb> dist;
      for (const auto& l : it->second) dist.push_back({label_symbol(atoms, l), l.prob});
      m.set_labels(s, std::move(dist));
    }
  }
  if (const auto starts = start_states(g); !starts.empty()) m.set_initial(starts.front());
  return m;
}

}  // namespace ldgba::worlds
