#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ehdrl/aoi_process.hpp"
#include "ehdrl/device.hpp"
#include "ehdrl/dqn.hpp"
#include "ehdrl/q_network.hpp"
#include "ehdrl/reward.hpp"
#include "ehdrl/weight_blob.hpp"

namespace ehdrl::sink {

struct SinkConfig {
  dqn::DqnConfig dqn;
  RewardParams reward;
  double capacity_j = 18.0;
  int buffer_len = 4;
  int aoi_window = aoi::AoIProcess::kDefaultWindow;
};

struct SinkStepResult {
  std::optional<double> loss;  // unset when no training happened
  bool target_synced = false;
  bool published = false;
};

// The unconstrained side: rebuilds experiences from status updates, trains
// the policy network and keeps the latest weights ready for download.
//
// Per step t: begin_step(t), ingest_update(...) for a delivered update,
// sink_step(t).
class Sink {
 public:
  Sink(SinkConfig cfg, const nn::QNetwork& initial, std::uint64_t seed);

  void begin_step(Step t) { aoi_.tick(t); }

  // Stores one experience per pair of consecutive-step records, using the
  // staged tail of the previous update as the predecessor of the first new
  // record. Records at or before the newest ingested step are ignored.
  // Throws std::invalid_argument for unsorted, duplicated or oversize input.
  std::size_t ingest_update(const device::StatusUpdate& update, Step t);

  SinkStepResult sink_step(Step t);

  // Latest published weights while not yet downloaded, else nullptr.
  const nn::WeightBlob* pending_blob() const { return pending_ ? &blob_ : nullptr; }
  void mark_delivered() { pending_ = false; }

  void set_learning(bool enabled) { learning_ = enabled; }
  bool learning() const { return learning_; }

  const SinkConfig& config() const { return cfg_; }
  const nn::QNetwork& policy() const { return policy_; }
  const nn::QNetwork& target() const { return target_; }
  const dqn::ReplayMemory& memory() const { return memory_; }
  const aoi::AoIProcess& aoi() const { return aoi_; }
  aoi::AoIProcess& aoi() { return aoi_; }
  std::int64_t train_steps() const { return train_steps_; }
  std::int64_t target_syncs() const { return target_syncs_; }
  const std::optional<device::ObservationRecord>& staged() const { return staged_; }

  // Reward of an action taken at step t with the given stored energy, using
  // the sink's past-day mean AoI at t.
  double reward_at(Step t, Action a, double energy_j) const;

 private:
  SinkConfig cfg_;
  nn::QNetwork policy_;
  nn::QNetwork target_;
  nn::AdamState adam_;
  dqn::ReplayMemory memory_;
  aoi::AoIProcess aoi_;
  Rng rng_;
  std::optional<device::ObservationRecord> staged_;
  Step newest_ingested_ = 0;
  std::int64_t train_steps_ = 0;
  std::int64_t target_syncs_ = 0;
  bool learning_ = true;
  nn::WeightBlob blob_;
  std::uint64_t published_revision_ = 0;
  bool pending_ = false;
};

}  // namespace ehdrl::sink
