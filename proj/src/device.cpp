#include "ehdrl/device.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ehdrl::device {

int t_ann_steps(int updates_per_day) {
  switch (updates_per_day) {
    case 1: return 660;
    case 2: return 240;
    case 3: return 180;
    default: throw std::invalid_argument("updates_per_day must be 1, 2 or 3");
  }
}

namespace {

// Deterministic stand-in for the sensor payload; the learner never reads it.
void fill_payload(ObservationRecord& r, int steps_per_day) {
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(r.step % steps_per_day) / steps_per_day;
  r.temperature = 21.0 + 3.0 * std::sin(phase - std::numbers::pi / 2.0);
  r.humidity = 40.0 - 8.0 * std::sin(phase - std::numbers::pi / 2.0);
}

}  // namespace

Device::Device(energy::EnergyConfig cfg, nn::QNetwork cached, std::uint64_t channel_seed, int t_ann)
    : cfg_(cfg),
      energy_(energy::EnergyState::initial(cfg)),
      cached_(std::move(cached)),
      channel_(channel_seed),
      t_ann_(t_ann) {
  cfg_.validate();
  if (t_ann < 0) throw std::invalid_argument("T_ANN must be non-negative");
}

ActOutcome Device::sense_and_act(Step t, const energy::HarvestTrace& trace, const Decider& decide) {
  ActOutcome out;
  energy_.harvest(cfg_, trace.at(t));
  if (!(energy_.stored_j() > cfg_.sense_j) || !energy_.debit(cfg_.sense_j)) {
    return out;
  }
  out.awake = true;
  awake_step_ = t;

  ObservationRecord record;
  record.step = t;
  record.state = StateVector{energy_.stored_j(), static_cast<double>(aoi_steps(t)), energy_.harvest_a()};
  fill_payload(record, cfg_.steps_per_day());
  out.state = record.state;

  if (static_cast<int>(buffer_.size()) == cfg_.buffer_len) buffer_.pop_front();
  buffer_.push_back(record);

  const double cost = energy::tx_cost(cfg_, static_cast<int>(buffer_.size()));
  out.insufficient_energy = energy_.stored_j() < cost;
  out.action = decide(t, record.state);
  buffer_.back().action = out.action;

  if (out.action == Action::kTransmit && energy_.debit(cost)) {
    out.tx_attempted = true;
    out.tx_succeeded = channel_.bernoulli(cfg_.success_prob);
    if (out.tx_succeeded) {
      buffer_.back().tx_success = true;
      out.delivered = StatusUpdate{t, {buffer_.begin(), buffer_.end()}};
      buffer_.clear();
      last_ack_ = t;
    }
  }
  return out;
}

bool Device::install(const nn::WeightBlob& blob) {
  try {
    cached_ = nn::deserialize(blob, cached_.options());
  } catch (const nn::BlobError&) {
    return false;
  }
  ++installs_;
  return true;
}

bool Device::offer_weights(Step t, const nn::WeightBlob* pending) {
  if (!awake_at(t)) return false;
  ++timer_;
  if (timer_ >= t_ann_ && pending != nullptr && energy_.stored_j() >= cfg_.ann_update_j &&
      energy_.debit(cfg_.ann_update_j)) {
    timer_ = 0;
    return install(*pending);
  }
  return false;
}

bool Device::install_free(Step t, const nn::WeightBlob* pending) {
  return awake_at(t) && pending != nullptr && install(*pending);
}

StepOutcome device_step(Device& dev, Step t, const energy::HarvestTrace& trace,
                        const Decider& decide, const nn::WeightBlob* downlink) {
  StepOutcome out;
  out.act = dev.sense_and_act(t, trace, decide);
  if (out.act.awake) out.weights_installed = dev.offer_weights(t, downlink);
  return out;
}

}  // namespace ehdrl::device
