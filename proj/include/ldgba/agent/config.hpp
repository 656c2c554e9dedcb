#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldgba/product/reward.hpp"

namespace ldgba::agent {

using product::RewardMode;

enum class TaskMode { Aware, Unaware };
enum class Network { Lstm, Dense };
enum class Optimizer { Sgd, Adam };
enum class FitCadence { EveryM, EveryStep };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& key, const std::string& s) {
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError(key + ": not a number: '" + s + "'");
  return v;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError(key + ": not a non-negative integer: '" + s + "'");
  return v;
}

struct TrainConfig {
  std::uint64_t episodes = 1000;
  std::uint64_t steps = 500;
  std::uint64_t batch = 32;          // M
  std::uint64_t sync = 50;           // K, in steps
  std::uint64_t obs_window = 5;      // j + 1
  std::uint64_t task_window = 3;     // k
  double gamma = 0.98;
  double alpha = 1e-3;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay = 0.6;            // fraction of episodes over which epsilon decays linearly
  double p_epsilon = 0.05;           // per-step chance of an epsilon move while in the N part
  RewardMode reward = RewardMode::Base;
  double base_reward = 10.0;
  double reward_scale = 1.0;         // multiplies rewards inside Q-targets only; greedy policies are unchanged
  TaskMode mode = TaskMode::Aware;
  Network network = Network::Lstm;
  Optimizer optimizer = Optimizer::Sgd;
  FitCadence cadence = FitCadence::EveryM;
  std::uint64_t replay = 100000;
  std::uint64_t obs_hidden = 32;
  std::uint64_t task_hidden = 16;
  std::uint64_t seed = 0;

  double epsilon_at(std::uint64_t episode) const {
    const double horizon = eps_decay * static_cast<double>(episodes);
    if (horizon <= 0.0 || static_cast<double>(episode) >= horizon) return eps_end;
    return eps_start + (eps_end - eps_start) * static_cast<double>(episode) / horizon;
  }

  /// Every key in canonical order with its text value.
  std::vector<std::pair<std::string, std::string>> to_kv() const {
    return {
        {"episodes", std::to_string(episodes)},
        {"steps", std::to_string(steps)},
        {"batch", std::to_string(batch)},
        {"sync", std::to_string(sync)},
        {"obs_window", std::to_string(obs_window)},
        {"task_window", std::to_string(task_window)},
        {"gamma", format_double(gamma)},
        {"alpha", format_double(alpha)},
        {"eps_start", format_double(eps_start)},
        {"eps_end", format_double(eps_end)},
        {"eps_decay", format_double(eps_decay)},
        {"p_epsilon", format_double(p_epsilon)},
        {"reward", product::to_string(reward)},
        {"base_reward", format_double(base_reward)},
        {"reward_scale", format_double(reward_scale)},
        {"mode", mode == TaskMode::Aware ? "aware" : "unaware"},
        {"network", network == Network::Lstm ? "lstm" : "dense"},
        {"optimizer", optimizer == Optimizer::Sgd ? "sgd" : "adam"},
        {"cadence", cadence == FitCadence::EveryM ? "every_m" : "every_step"},
        {"replay", std::to_string(replay)},
        {"obs_hidden", std::to_string(obs_hidden)},
        {"task_hidden", std::to_string(task_hidden)},
        {"seed", std::to_string(seed)},
    };
  }

  /// Applies one key; unknown keys and malformed values throw ConfigError.
  void set(const std::string& key, const std::string& value) {
    auto pick = [&](std::initializer_list<const char*> names) {
      int i = 0;
      for (const char* n : names) {
        if (value == n) return i;
        ++i;
      }
      std::string all;
      for (const char* n : names) all += std::string(all.empty() ? "" : "|") + n;
      throw ConfigError(key + ": expected " + all + ", got '" + value + "'");
    };
    if (key == "episodes") episodes = parse_uint(key, value);
    else if (key == "steps") steps = parse_uint(key, value);
    else if (key == "batch") batch = parse_uint(key, value);
    else if (key == "sync") sync = parse_uint(key, value);
    else if (key == "obs_window") obs_window = parse_uint(key, value);
    else if (key == "task_window") task_window = parse_uint(key, value);
    else if (key == "gamma") gamma = parse_double(key, value);
    else if (key == "alpha") alpha = parse_double(key, value);
    else if (key == "eps_start") eps_start = parse_double(key, value);
    else if (key == "eps_end") eps_end = parse_double(key, value);
    else if (key == "eps_decay") eps_decay = parse_double(key, value);
    else if (key == "p_epsilon") p_epsilon = parse_double(key, value);
    else if (key == "reward") {
      try {
        reward = product::parse_reward_mode(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
      }
    } else if (key == "base_reward") base_reward = parse_double(key, value);
    else if (key == "reward_scale") reward_scale = parse_double(key, value);
    else if (key == "mode") mode = pick({"aware", "unaware"}) == 0 ? TaskMode::Aware : TaskMode::Unaware;
    else if (key == "network") network = pick({"lstm", "dense"}) == 0 ? Network::Lstm : Network::Dense;
    else if (key == "optimizer") optimizer = pick({"sgd", "adam"}) == 0 ? Optimizer::Sgd : Optimizer::Adam;
    else if (key == "cadence") cadence = pick({"every_m", "every_step"}) == 0 ? FitCadence::EveryM : FitCadence::EveryStep;
    else if (key == "replay") replay = parse_uint(key, value);
    else if (key == "obs_hidden") obs_hidden = parse_uint(key, value);
    else if (key == "task_hidden") task_hidden = parse_uint(key, value);
    else if (key == "seed") seed = parse_uint(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }

  /// Range checks; every problem listed.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    if (batch == 0) out.push_back("batch must be >= 1");
    if (sync == 0) out.push_back("sync must be >= 1");
    if (obs_window == 0) out.push_back("obs_window must be >= 1");
    if (task_window == 0) out.push_back("task_window must be >= 1");
    if (!(gamma >= 0.0 && gamma < 1.0)) out.push_back("gamma must lie in [0, 1)");
    if (!(alpha > 0.0)) out.push_back("alpha must be positive");
    if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= 1.0))
      out.push_back("exploration rates must lie in [0, 1]");
    if (!(eps_decay >= 0.0 && eps_decay <= 1.0)) out.push_back("eps_decay must lie in [0, 1]");
    if (!(p_epsilon >= 0.0 && p_epsilon <= 1.0)) out.push_back("p_epsilon must lie in [0, 1]");
    if (!(reward_scale > 0.0)) out.push_back("reward_scale must be positive");
    if (replay < batch) out.push_back("replay capacity must hold at least one batch");
    if (obs_hidden == 0 || obs_hidden > 256 || task_hidden == 0 || task_hidden > 256)
      out.push_back("hidden sizes must lie in [1, 256]");
    return out;
  }

  void check() const {
    const auto p = problems();
    if (!p.empty()) throw ConfigError(p.front());
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

}  // namespace ldgba::agent
