#pragma once

#include <stdexcept>
#include <string>

namespace ldgba::product {

/// Base pays on every move into an accepting set; Redesigned only when the
/// automaton state also changes, so accepting self-loops pay nothing.
enum class RewardMode { Base, Redesigned };

inline std::string to_string(RewardMode m) { return m == RewardMode::Base ? "base" : "redesigned"; }

inline RewardMode parse_reward_mode(const std::string& s) {
  if (s == "base") return RewardMode::Base;
  if (s == "redesigned") return RewardMode::Redesigned;
  throw std::invalid_argument("reward mode must be base or redesigned, got '" + s + "'");
}

}  // namespace ldgba::product
