#include "ehdrl/replay_memory.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ehdrl::dqn {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay memory capacity must be positive");
}

void ReplayMemory::push(const Experience& e) {
  if (size_ < capacity_) {
    slots_.push_back(e);
    ++size_;
    return;
  }
  slots_[head_] = e;
  head_ = (head_ + 1) % capacity_;
}

const Experience& ReplayMemory::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("replay memory index out of range");
  return slots_[(head_ + i) % capacity_];
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t count, Rng& rng) const {
  if (count > size_) throw std::invalid_argument("cannot sample more experiences than stored");
  std::vector<std::size_t> picked;
  picked.reserve(count);
  std::unordered_set<std::size_t> seen;
  seen.reserve(count * 2);
  for (std::size_t j = size_ - count; j < size_; ++j) {
    const std::size_t t = rng.below(j + 1);
    const std::size_t choice = seen.contains(t) ? j : t;
    seen.insert(choice);
    picked.push_back(choice);
  }
  return picked;
}

std::vector<Experience> ReplayMemory::sample(std::size_t count, Rng& rng) const {
  std::vector<Experience> out;
  out.reserve(count);
  for (std::size_t i : sample_indices(count, rng)) out.push_back(at(i));
  return out;
}

}  // namespace ehdrl::dqn
