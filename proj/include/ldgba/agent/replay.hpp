#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ldgba/neural/tensor.hpp"
#include "ldgba/pomdp/rng.hpp"

namespace ldgba::agent {

struct Experience {
  neural::Sequence obs, task;
  std::uint32_t action = 0;
  double reward = 0.0;
  neural::Sequence next_obs, next_task;
  bool terminal = false;  // the automaton entered a trap: no future reward
};

/// Circular buffer; once full, each push overwrites the oldest entry.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Experience& at(std::size_t i) const { return items_.at(i); }

  void push(Experience e) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(e));
    } else {
      items_[next_] = std::move(e);
      next_ = (next_ + 1) % capacity_;
    }
  }

  /// m distinct indices, uniform over the stored experiences.
  std::vector<std::size_t> sample(std::size_t m, pomdp::Rng& rng) const {
    if (m > items_.size())
      throw std::invalid_argument("cannot draw " + std::to_string(m) + " from " + std::to_string(items_.size()));
    std::vector<std::size_t> out;
    out.reserve(m);
    while (out.size() < m) {
      const std::size_t i = rng.index(pomdp::Stream::Replay, items_.size());
      if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
    }
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Experience> items_;
};

}  // namespace ldgba::agent
