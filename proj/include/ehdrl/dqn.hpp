#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ehdrl/adam.hpp"
#include "ehdrl/q_network.hpp"
#include "ehdrl/replay_memory.hpp"
#include "ehdrl/rng.hpp"
#include "ehdrl/types.hpp"

namespace ehdrl::dqn {

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::int64_t decay_steps = 1440;

  // Linear from `start` to `end` over `decay_steps`, constant afterwards.
  double at(std::int64_t step) const;
};

struct DqnConfig {
  std::size_t batch_size = 64;
  std::size_t memory_capacity = ReplayMemory::kDefaultCapacity;
  double gamma = 0.99;
  std::int64_t target_sync_period = 100;
  EpsilonSchedule epsilon;
  nn::AdamOptions adam;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

// Epsilon-greedy over the Infer-mode Q-values. Exactly one uniform draw
// decides exploration; exploring consumes one more draw for the action.
// Greedy ties resolve to Action::kWait.
Action select_action(const nn::QNetwork& net, const StateVector& s, double epsilon, Rng& rng);

Action greedy_action(const Eigen::RowVectorXd& q_values);

// One DQN update of `policy` on a batch sampled without replacement.
// Returns std::nullopt (and leaves every network untouched) while the memory
// holds fewer than batch_size experiences.
std::optional<double> train_step(nn::QNetwork& policy, const nn::QNetwork& target,
                                 const ReplayMemory& memory, const DqnConfig& cfg,
                                 nn::AdamState& opt, Rng& rng);

// Loss and update on an explicit batch; train_step delegates here.
double train_on_batch(nn::QNetwork& policy, const nn::QNetwork& target,
                      const std::vector<Experience>& batch, double gamma, nn::AdamState& opt,
                      Rng& rng);

void sync_target(const nn::QNetwork& policy, nn::QNetwork& target);

}  // namespace ehdrl::dqn
