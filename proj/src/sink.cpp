#include "ehdrl/sink.hpp"

#include <stdexcept>

namespace ehdrl::sink {

Sink::Sink(SinkConfig cfg, const nn::QNetwork& initial, std::uint64_t seed)
    : cfg_(cfg),
      policy_(initial),
      target_(initial),
      adam_(initial.layout().size, cfg.dqn.adam),
      memory_(cfg.dqn.memory_capacity),
      aoi_(cfg.aoi_window),
      rng_(seed),
      blob_(nn::serialize(initial)),
      published_revision_(initial.revision()) {
  cfg_.dqn.validate();
}

double Sink::reward_at(Step t, Action a, double energy_j) const {
  return reward(a, aoi_.past_window_mean(t), energy_j, cfg_.capacity_j, cfg_.reward);
}

std::size_t Sink::ingest_update(const device::StatusUpdate& update, Step t) {
  const auto& records = update.records;
  if (records.size() > static_cast<std::size_t>(cfg_.buffer_len)) {
    throw std::invalid_argument("status update carries more than M observations");
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].step <= records[i - 1].step) {
      throw std::invalid_argument("status update records must have strictly increasing steps");
    }
  }
  if (records.empty()) return 0;

  std::size_t stored = 0;
  for (const auto& rec : records) {
    if (rec.step <= newest_ingested_) continue;
    if (staged_ && staged_->step + 1 == rec.step) {
      const auto& prev = *staged_;
      memory_.push(dqn::Experience{prev.state, prev.action,
                                   reward_at(prev.step, prev.action, prev.state.energy_j),
                                   rec.state, false});
      ++stored;
    }
    staged_ = rec;
    newest_ingested_ = rec.step;
  }
  aoi_.receive(t, records.back().step);
  return stored;
}

SinkStepResult Sink::sink_step(Step /*t*/) {
  SinkStepResult result;
  if (learning_) {
    result.loss = dqn::train_step(policy_, target_, memory_, cfg_.dqn, adam_, rng_);
    if (result.loss) {
      ++train_steps_;
      if (train_steps_ % cfg_.dqn.target_sync_period == 0) {
        dqn::sync_target(policy_, target_);
        ++target_syncs_;
        result.target_synced = true;
      }
    }
  }
  if (policy_.revision() != published_revision_) {
    blob_ = nn::serialize(policy_);
    published_revision_ = policy_.revision();
    pending_ = true;
    result.published = true;
  }
  return result;
}

}  // namespace ehdrl::sink
