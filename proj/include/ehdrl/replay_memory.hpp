#pragma once

#include <cstddef>
#include <vector>

#include "ehdrl/rng.hpp"
#include "ehdrl/types.hpp"

namespace ehdrl::dqn {

struct Experience {
  StateVector state;
  Action action = Action::kWait;
  double reward = 0.0;
  StateVector next_state;
  bool terminal = false;  // always false: the task is continuing

  friend bool operator==(const Experience&, const Experience&) = default;
};

// Fixed-capacity FIFO of experiences; pushing past capacity evicts the oldest.
class ReplayMemory {
 public:
  static constexpr std::size_t kDefaultCapacity = 100000;

  explicit ReplayMemory(std::size_t capacity = kDefaultCapacity);

  void push(const Experience& e);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }

  // Logical index: 0 is the oldest retained experience.
  const Experience& at(std::size_t i) const;

  // `count` distinct logical indices drawn uniformly (Floyd's algorithm).
  std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const;
  std::vector<Experience> sample(std::size_t count, Rng& rng) const;

 private:
  std::vector<Experience> slots_;
  std::size_t capacity_;
  std::size_t head_ = 0;  // physical slot of the oldest item
  std::size_t size_ = 0;
};

}  // namespace ehdrl::dqn
