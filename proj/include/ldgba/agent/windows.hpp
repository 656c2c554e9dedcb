#pragma once

#include <deque>

#include "ldgba/agent/config.hpp"
#include "ldgba/neural/tensor.hpp"

namespace ldgba::agent {

using neural::Sequence;

/// The last j+1 observations and a FIFO of the last k distinct task items
/// (automaton states in aware mode, non-empty labels in unaware mode).
class HistoryWindows {
 public:
  HistoryWindows(std::size_t obs_len, std::size_t task_len, std::int32_t initial_task)
      : obs_len_(obs_len), task_len_(task_len) {
    if (obs_len == 0 || task_len == 0) throw std::invalid_argument("window lengths must be positive");
    task_.push_back(initial_task);
  }

  std::size_t obs_len() const { return obs_len_; }
  std::size_t task_len() const { return task_len_; }
  bool obs_full() const { return obs_.size() == obs_len_; }
  const std::deque<std::int32_t>& observations() const { return obs_; }
  const std::deque<std::int32_t>& tasks() const { return task_; }

  void push_observation(std::uint32_t o) {
    obs_.push_back(static_cast<std::int32_t>(o));
    if (obs_.size() > obs_len_) obs_.pop_front();
  }

  /// Appends only on change; returns whether the FIFO moved.
  bool push_task(std::int32_t item) {
    if (task_.back() == item) return false;
    task_.push_back(item);
    if (task_.size() > task_len_) task_.pop_front();
    return true;
  }

  Sequence obs_sequence(std::size_t vocab) const { return {vocab, {obs_.begin(), obs_.end()}}; }

  /// Appends exactly task_len items, left-padded with the oldest entry.
  void append_task(Sequence& seq) const {
    for (std::size_t i = task_.size(); i < task_len_; ++i) seq.items.push_back(task_.front());
    seq.items.insert(seq.items.end(), task_.begin(), task_.end());
  }

  Sequence task_sequence(std::size_t vocab) const {
    Sequence s{vocab, {}};
    append_task(s);
    return s;
  }

 private:
  std::size_t obs_len_, task_len_;
  std::deque<std::int32_t> obs_, task_;
};

}  // namespace ldgba::agent
