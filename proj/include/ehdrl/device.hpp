#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ehdrl/energy.hpp"
#include "ehdrl/harvest_trace.hpp"
#include "ehdrl/q_network.hpp"
#include "ehdrl/rng.hpp"
#include "ehdrl/types.hpp"
#include "ehdrl/weight_blob.hpp"

namespace ehdrl::device {

// One awake step's telemetry, buffered on the device and shipped inside
// status updates. The measurement fields are opaque payload.
struct ObservationRecord {
  Step step = 0;
  StateVector state;
  Action action = Action::kWait;
  bool tx_success = false;
  double humidity = 0.0;
  double temperature = 0.0;

  friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

struct StatusUpdate {
  Step sent_at = 0;
  std::vector<ObservationRecord> records;  // ascending step order
};

// Minimum steps between weight downloads for 1, 2 or 3 updates per day
// (22 h, 8 h and 6 h at 120 s steps). Throws std::invalid_argument otherwise.
int t_ann_steps(int updates_per_day);

using Decider = std::function<Action(Step, const StateVector&)>;

struct ActOutcome {
  bool awake = false;
  StateVector state;
  Action action = Action::kWait;
  bool tx_attempted = false;
  bool tx_succeeded = false;
  // E(t) below the cost of sending the current buffer (or asleep).
  bool insufficient_energy = true;
  std::optional<StatusUpdate> delivered;
};

struct StepOutcome {
  ActOutcome act;
  bool weights_installed = false;
};

// The energy-constrained source: senses, decides with its cached network
// and never trains. Q_c only changes through a weight download.
class Device {
 public:
  Device(energy::EnergyConfig cfg, nn::QNetwork cached, std::uint64_t channel_seed,
         int t_ann = t_ann_steps(1));

  // Harvest, wake if E > E_M, record an observation, decide and transmit.
  ActOutcome sense_and_act(Step t, const energy::HarvestTrace& trace, const Decider& decide);

  // Weight-download gate, evaluated at the end of an awake step: the update
  // timer counts awake steps since the last install; a pending blob is
  // installed when the timer reached T_ANN and E >= E_ANN.
  bool offer_weights(Step t, const nn::WeightBlob* pending);

  // Free install used by the unconstrained baseline: no timer, no energy,
  // still only while awake at step t.
  bool install_free(Step t, const nn::WeightBlob* pending);

  void set_update_schedule(int updates_per_day) { t_ann_ = t_ann_steps(updates_per_day); }
  void set_t_ann(int steps) { t_ann_ = steps; }

  const energy::EnergyConfig& config() const { return cfg_; }
  const energy::EnergyState& energy() const { return energy_; }
  const nn::QNetwork& cached() const { return cached_; }
  const std::deque<ObservationRecord>& buffer() const { return buffer_; }
  Step last_acknowledged() const { return last_ack_; }
  Step aoi_steps(Step t) const { return t - last_ack_; }
  int update_timer() const { return timer_; }
  int t_ann() const { return t_ann_; }
  std::int64_t installs() const { return installs_; }
  bool awake_at(Step t) const { return awake_step_ == t; }

 private:
  bool install(const nn::WeightBlob& blob);

  energy::EnergyConfig cfg_;
  energy::EnergyState energy_;
  nn::QNetwork cached_;
  Rng channel_;
  int t_ann_;
  int timer_ = 0;
  std::deque<ObservationRecord> buffer_;
  Step last_ack_ = 0;
  Step awake_step_ = 0;
  std::int64_t installs_ = 0;
};

// Both device phases in one call with a fixed downlink, for use without a
// sink in the loop.
StepOutcome device_step(Device& dev, Step t, const energy::HarvestTrace& trace,
                        const Decider& decide, const nn::WeightBlob* downlink);

}  // namespace ehdrl::device
