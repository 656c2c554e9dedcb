#pragma once

// Environment files: INI-style sections of "key = value" lines. The format
// is described in docs/env_schema.md; save_env writes the canonical form
// that load_env reads back unchanged.

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ldgba/worlds/grid.hpp"

namespace ldgba::worlds {

class EnvError : public std::runtime_error {
 public:
  EnvError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw EnvError("not an integer: '" + s + "'", line);
  return v;
}

inline Cell parse_cell(const std::string& s, std::size_t line) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw EnvError("cell must be written x,y: '" + s + "'", line);
  return {parse_int(s.substr(0, comma), line), parse_int(s.substr(comma + 1), line)};
}

inline std::vector<Cell> parse_cells(const std::string& s, std::size_t line) {
  std::vector<Cell> out;
  for (const auto& w : words(s)) out.push_back(parse_cell(w, line));
  return out;
}

inline std::string format_cells(const std::vector<Cell>& cells) {
  std::string out;
  for (Cell c : cells) out += (out.empty() ? "" : " ") + to_string(c);
  return out;
}

// "{a,b}:0.5" or "{a}" (probability 1) or "{}" (no atom)
inline LabelChoice parse_label(const std::string& w, std::size_t line) {
  const auto close = w.find('}');
  if (w.empty() || w[0] != '{' || close == std::string::npos)
    throw EnvError("label must be written {atoms} or {atoms}:p, got '" + w + "'", line);
  LabelChoice l;
  std::string inner = w.substr(1, close - 1);
  std::stringstream ss(inner);
  for (std::string a; std::getline(ss, a, ',');) {
    a = trim(a);
    if (a.empty()) throw EnvError("empty atom in label '" + w + "'", line);
    l.atoms.push_back(a);
  }
  std::sort(l.atoms.begin(), l.atoms.end());
  const std::string rest = w.substr(close + 1);
  if (rest.empty()) l.prob = 1.0;
  else if (rest[0] == ':') {
    try {
      l.prob = agent::parse_double("label", rest.substr(1));
    } catch (const agent::ConfigError&) {
      throw EnvError("bad label probability in '" + w + "'", line);
    }
  } else throw EnvError("unexpected text after label: '" + w + "'", line);
  return l;
}

inline std::string format_labels(const std::vector<LabelChoice>& dist) {
  std::string out;
  for (const auto& l : dist) {
    std::string w = "{";
    for (std::size_t i = 0; i < l.atoms.size(); ++i) w += (i ? "," : "") + l.atoms[i];
    w += "}";
    if (!(dist.size() == 1 && l.prob == 1.0)) w += ":" + agent::format_double(l.prob);
    out += (out.empty() ? "" : " ") + w;
  }
  return out;
}

inline const char* noise_name(Noise n) { return n == Noise::SideSlip ? "side" : "uniform"; }
inline const char* observation_name(ObservationModel m) {
  switch (m) {
    case ObservationModel::Neighbors: return "neighbors";
    case ObservationModel::Exact: return "exact";
    case ObservationModel::Sides: return "sides";
    case ObservationModel::SingleSide: return "single_side";
  }
  return "";
}

}  // namespace detail

/// Canonical text of a spec. Sections with no content are omitted, except
/// [grid] and [train] which are always written in full.
inline std::string save_env(const GridSpec& g) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "name = " << g.name << "\n";
  if (!g.note.empty()) out << "note = " << g.note << "\n";
  out << "width = " << g.width << "\n";
  out << "height = " << g.height << "\n";
  std::string atoms;
  for (const auto& a : g.atoms) atoms += (atoms.empty() ? "" : ",") + a;
  out << "atoms = " << atoms << "\n";
  out << "actions = " << (g.stay_action ? "move_stay" : "move") << "\n";
  out << "noise = " << detail::noise_name(g.noise) << "\n";
  out << "observation = " << detail::observation_name(g.observation) << "\n";
  out << "task = " << g.task << "\n";
  out << "start = " << (g.starts.empty() ? std::string("uniform") : detail::format_cells(g.starts)) << "\n";
  if (!g.blocked.empty()) {
    auto cells = g.blocked;
    std::sort(cells.begin(), cells.end());
    out << "\n[blocked]\ncells = " << detail::format_cells(cells) << "\n";
  }
  if (!g.traps.empty()) {
    auto cells = g.traps;
    std::sort(cells.begin(), cells.end());
    out << "\n[traps]\ncells = " << detail::format_cells(cells) << "\n";
  }
  if (!g.labels.empty()) {
    out << "\n[labels]\n";
    for (const auto& [c, dist] : g.labels) out << to_string(c) << " = " << detail::format_labels(dist) << "\n";
  }
  if (!g.sides.empty()) {
    out << "\n[sides]\n";
    for (const auto& [c, s] : g.sides) out << to_string(c) << " = " << s[0] << " " << s[1] << " " << s[2] << " " << s[3] << "\n";
  }
  out << "\n[train]\n";
  for (const auto& [k, v] : g.train.to_kv()) out << k << " = " << v << "\n";
  return out.str();
}

/// Parses an environment file; every schema problem is reported with its
/// line, and the assembled spec must pass check().
inline GridSpec parse_env(std::string_view text) {
  GridSpec g;
  std::string section;
  std::set<std::string> seen_sections, seen_grid_keys;
  std::set<Cell> seen_label_cells, seen_side_cells;
  std::set<std::string> seen_train_keys;
  std::size_t ln = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++ln;
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw EnvError("malformed section header", ln);
      section = line.substr(1, line.size() - 2);
      static const std::set<std::string> known = {"grid", "blocked", "traps", "labels", "sides", "train"};
      if (!known.count(section)) throw EnvError("unknown section [" + section + "]", ln);
      if (!seen_sections.insert(section).second) throw EnvError("duplicate section [" + section + "]", ln);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw EnvError("expected key = value", ln);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty()) throw EnvError("key '" + key + "' outside any section", ln);

    if (section == "grid") {
      if (!seen_grid_keys.insert(key).second) throw EnvError("duplicate key '" + key + "'", ln);
      if (key == "name") g.name = value;
      else if (key == "note") g.note = value;
      else if (key == "width") g.width = detail::parse_int(value, ln);
      else if (key == "height") g.height = detail::parse_int(value, ln);
      else if (key == "atoms") {
        std::stringstream ss(value);
        for (std::string a; std::getline(ss, a, ',');) g.atoms.push_back(detail::trim(a));
        if (!std::is_sorted(g.atoms.begin(), g.atoms.end())) throw EnvError("atoms must be listed in sorted order", ln);
      } else if (key == "actions") {
        if (value == "move") g.stay_action = false;
        else if (value == "move_stay") g.stay_action = true;
        else throw EnvError("actions must be move or move_stay", ln);
      } else if (key == "noise") {
        if (value == "side") g.noise = Noise::SideSlip;
        else if (value == "uniform") g.noise = Noise::UniformSlip;
        else throw EnvError("noise must be side or uniform", ln);
      } else if (key == "observation") {
        if (value == "neighbors") g.observation = ObservationModel::Neighbors;
        else if (value == "exact") g.observation = ObservationModel::Exact;
        else if (value == "sides") g.observation = ObservationModel::Sides;
        else if (value == "single_side") g.observation = ObservationModel::SingleSide;
        else throw EnvError("observation must be neighbors, exact, sides or single_side", ln);
      } else if (key == "task") g.task = value;
      else if (key == "start") g.starts = value == "uniform" ? std::vector<Cell>{} : detail::parse_cells(value, ln);
      else throw EnvError("unknown key '" + key + "' in [grid]", ln);
    } else if (section == "blocked" || section == "traps") {
      if (key != "cells") throw EnvError("unknown key '" + key + "' in [" + section + "]", ln);
      auto& dst = section == "blocked" ? g.blocked : g.traps;
      for (Cell c : detail::parse_cells(value, ln)) dst.push_back(c);
    } else if (section == "labels") {
      const Cell c = detail::parse_cell(key, ln);
      if (!seen_label_cells.insert(c).second) throw EnvError("cell " + to_string(c) + " labelled twice", ln);
      std::vector<LabelChoice> dist;
      for (const auto& w : detail::words(value)) dist.push_back(detail::parse_label(w, ln));
      if (dist.empty()) throw EnvError("cell " + to_string(c) + " has an empty label list", ln);
      g.labels[c] = std::move(dist);
    } else if (section == "sides") {
      const Cell c = detail::parse_cell(key, ln);
      if (!seen_side_cells.insert(c).second) throw EnvError("cell " + to_string(c) + " given twice", ln);
      const auto w = detail::words(value);
      if (w.size() != 4) throw EnvError("sides need four items (N W S E)", ln);
      g.sides[c] = {w[0], w[1], w[2], w[3]};
    } else if (section == "train") {
      if (!seen_train_keys.insert(key).second) throw EnvError("duplicate key '" + key + "'", ln);
      try {
        g.train.set(key, value);
      } catch (const agent::ConfigError& e) {
        throw EnvError(e.what(), ln);
      }
    }
  }
  std::sort(g.blocked.begin(), g.blocked.end());
  std::sort(g.traps.begin(), g.traps.end());
  for (const char* k : {"name", "width", "height", "atoms", "task"})
    if (!seen_grid_keys.count(k)) throw EnvError(std::string("missing [grid] key '") + k + "'", 0);
  if (auto p = check(g); !p.empty()) throw EnvError(p.front(), 0);
  return g;
}

inline GridSpec load_env(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvError("cannot open " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_env(ss.str());
}

inline void write_env(const GridSpec& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EnvError("cannot write " + path, 0);
  out << save_env(g);
}

}  // namespace ldgba::worlds
