#pragma once

// Run setup shared by the command-line tool and the acceptance harness:
// resolving an environment plus task source, run manifests, and the
// metrics / plot CSV writers.

#include <openssl/sha.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldgba/agent/marl.hpp"
#include "ldgba/automata/hoa.hpp"
#include "ldgba/translate/registry.hpp"
#include "ldgba/worlds/presets.hpp"

namespace ldgba::cli {

/// Bad user input (missing file, inconsistent flags); exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TaskKind { Registry, Formula, Hoa };

struct TaskSource {
  TaskKind kind = TaskKind::Registry;
  std::string text;   // registry name, formula, or HOA document
  std::string atoms;  // formula only: comma separated
};

inline const char* kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::Registry: return "registry";
    case TaskKind::Formula: return "formula";
    case TaskKind::Hoa: return "hoa";
  }
  return "";
}

inline TaskKind parse_kind(const std::string& s) {
  if (s == "registry") return TaskKind::Registry;
  if (s == "formula") return TaskKind::Formula;
  if (s == "hoa") return TaskKind::Hoa;
  throw InputError("unknown task kind '" + s + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

inline automata::Ldgba build_automaton(const TaskSource& t) {
  switch (t.kind) {
    case TaskKind::Registry: return translate::task_automaton(t.text);
    case TaskKind::Formula: {
      if (t.atoms.empty()) {
        const auto f = logic::parse(t.text);
        return translate::translate(f, logic::atoms_of(f));
      }
      const auto atoms = logic::AtomSet::from_csv(t.atoms);
      return translate::translate(logic::parse(t.text, atoms), atoms);
    }
    case TaskKind::Hoa: return automata::load_hoa(t.text);
  }
  throw std::logic_error("unreachable task kind");
}

/// Everything a run needs: the environment spec (whose [train] section
/// holds the resolved config), the task source and the built models.
struct Setup {
  worlds::GridSpec spec;
  std::string env_origin;  // "preset:<name>" or the file path it was read from
  TaskSource task;
  pomdp::PlPomdp pomdp;
  automata::Ldgba automaton;

  const agent::TrainConfig& config() const { return spec.train; }
  bool two_agents() const { return spec.starts.size() == 2; }
};

/// Builds models for a spec and task; the task atoms must be environment atoms.
inline Setup make_setup(worlds::GridSpec spec, std::string origin, TaskSource task) {
  Setup s{std::move(spec), std::move(origin), std::move(task), {}, {}};
  s.pomdp = worlds::build_grid(s.spec);
  s.automaton = build_automaton(s.task);
  if (!s.automaton.atoms().is_subset_of(s.pomdp.atoms()))
    throw InputError("the task uses atoms the environment does not declare");
  return s;
}

/// Git blob hash (SHA-1 of "blob <size>\0" + content), lowercase hex.
inline std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  std::ostringstream hex;
  for (unsigned char c : digest) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
  return hex.str();
}

/// Hash over everything that determines a run: canonical env text (config
/// included) and the task source.
inline std::string input_hash(const Setup& s) {
  return git_blob_sha1(worlds::save_env(s.spec) + "\ntask:" + kind_name(s.task.kind) + "\n" + s.task.atoms + "\n" +
                       s.task.text);
}

inline nlohmann::ordered_json manifest_json(const Setup& s, const std::string& command) {
  nlohmann::ordered_json j;
  j["tool"] = "ldgba-planner";
  j["command"] = command;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : s.config().to_kv()) cfg[k] = v;
  j["config"] = cfg;
  j["seed"] = s.config().seed;
  j["mode"] = s.config().mode == agent::TaskMode::Aware ? "task-aware" : "task-unaware";
  j["env"] = {{"origin", s.env_origin}, {"text", worlds::save_env(s.spec)}};
  j["task"] = {{"kind", kind_name(s.task.kind)}, {"text", s.task.text}, {"atoms", s.task.atoms}};
  j["agents"] = s.two_agents() ? 2 : 1;
  j["input_hash"] = input_hash(s);
  return j;
}

/// Rebuilds the setup recorded in a manifest; the stored hash must match.
inline Setup setup_from_manifest(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    TaskSource t{parse_kind(j.at("task").at("kind").get<std::string>()), j.at("task").at("text").get<std::string>(),
                 j.at("task").at("atoms").get<std::string>()};
    Setup s = make_setup(worlds::parse_env(j.at("env").at("text").get<std::string>()),
                         j.at("env").at("origin").get<std::string>(), std::move(t));
    if (input_hash(s) != j.at("input_hash").get<std::string>())
      throw InputError("manifest input hash does not match its contents");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
}

// ---- metrics ----

inline std::string metrics_header() { return "episode,acc_reward,accepting_visits,trap,steps,mean_loss\n"; }

inline std::string metrics_row(const agent::EpisodeMetrics& m) {
  std::string row = std::to_string(m.episode) + "," + agent::format_double(m.acc_reward) + "," +
                    std::to_string(m.accepting_visits) + "," + (m.trap ? "1" : "0") + "," + std::to_string(m.steps) +
                    ",";
  if (!std::isnan(m.mean_loss)) row += agent::format_double(m.mean_loss);
  return row + "\n";
}

inline std::string metrics_csv(const std::vector<agent::EpisodeMetrics>& ms) {
  std::string out = metrics_header();
  for (const auto& m : ms) out += metrics_row(m);
  return out;
}

/// Mean of the last `window` values ending at i, fewer at the start.
inline std::vector<double> trailing_sma(const std::vector<double>& v, std::size_t window) {
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    if (i >= window) sum -= v[i - window];
    out[i] = sum / static_cast<double>(std::min(i + 1, window));
  }
  return out;
}

inline std::string plot_csv(const std::vector<agent::EpisodeMetrics>& ms) {
  std::vector<double> raw;
  for (const auto& m : ms) raw.push_back(m.acc_reward);
  const auto s10 = trailing_sma(raw, 10), s50 = trailing_sma(raw, 50);
  std::string out = "episode,raw,sma10,sma50\n";
  for (std::size_t i = 0; i < raw.size(); ++i)
    out += std::to_string(ms[i].episode) + "," + agent::format_double(raw[i]) + "," + agent::format_double(s10[i]) +
           "," + agent::format_double(s50[i]) + "\n";
  return out;
}

// ---- training ----

inline std::vector<std::uint32_t> start_states(const Setup& s) { return worlds::start_states(s.spec); }

inline agent::MarlOptions marl_options(const Setup& s) {
  agent::MarlOptions o;
  o.starts = {s.spec.state_of(s.spec.starts[0]), s.spec.state_of(s.spec.starts[1])};
  if (s.spec.stay_action) o.stay_action = 4;
  return o;
}

}  // namespace ldgba::cli
