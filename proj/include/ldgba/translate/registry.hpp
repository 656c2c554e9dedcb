#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ldgba/automata/split.hpp"
#include "ldgba/translate/fragment.hpp"

namespace ldgba::translate {

struct TaskSpec {
  std::string name;
  std::string formula;
  std::vector<std::string> atoms;
  // Atoms whose entering edges are separated by split_accepting; empty = no split.
  std::vector<std::string> split;
};

inline const std::vector<TaskSpec>& task_registry() {
  static const std::vector<TaskSpec> tasks = {
      {"grid_phi1", "(G F a | G F b) & G !c", {"a", "b", "c"}, {}},
      {"grid_phi2", "G F (a & F b) & G !c", {"a", "b", "c"}, {"a", "b"}},
      {"office_task1", "G F (Print & F (a | c)) & G !S", {"Print", "S", "a", "c"}, {"a", "c"}},
      {"office_task2", "(!(a | c) U Print) & (!Sply U (a | c)) & F Sply & G !S", {"Print", "S", "Sply", "a", "c"},
       {"a", "c"}},
      {"warehouse_phi", "G F (a & F b)", {"a", "b"}, {"a", "b"}},
      {"go_to_goal", "F b", {"b"}, {}},
  };
  return tasks;
}

inline const TaskSpec& task_spec(const std::string& name) {
  for (const auto& t : task_registry())
    if (t.name == name) return t;
  throw std::invalid_argument("unknown task '" + name + "'");
}

/// Registered task formula translated to an LDGBA, with accepting states
/// split per label where the task asks for it.
inline Ldgba task_automaton(const std::string& name) {
  const auto& spec = task_spec(name);
  const AtomSet atoms(spec.atoms);
  Ldgba a = translate(logic::parse(spec.formula, atoms), atoms);
  if (!spec.split.empty()) {
    std::vector<Symbol> labels;
    for (const auto& s : spec.split) labels.push_back(atoms.symbol({s}));
    a = automata::split_accepting(a, labels);
  }
  return a;
}

}  // namespace ldgba::translate
