#include "ehdrl/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehdrl::policies {

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::kSplitDrl: return "split-drl";
    case PolicyKind::kUnconstrainedDrl: return "unconstrained-drl";
    case PolicyKind::kThreshold: return "threshold";
    case PolicyKind::kIdealUniform: return "ideal-uniform";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view text) {
  for (auto p : {PolicyKind::kSplitDrl, PolicyKind::kUnconstrainedDrl, PolicyKind::kThreshold,
                 PolicyKind::kIdealUniform}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

Action threshold_decide(double energy_j, double capacity_j, Rng& rng) {
  return rng.uniform() < energy_j / capacity_j ? Action::kTransmit : Action::kWait;
}

std::vector<Step> uniform_steps(int per_day, int steps_per_day, Step total_steps) {
  std::vector<Step> out;
  if (per_day <= 0) return out;
  const Step days = (total_steps + steps_per_day - 1) / steps_per_day;
  for (Step d = 0; d < days; ++d) {
    for (int k = 0; k < per_day; ++k) {
      const auto offset = static_cast<Step>(std::floor((k + 0.5) * steps_per_day / per_day));
      const Step t = d * steps_per_day + 1 + offset;
      if (t <= total_steps) out.push_back(t);
    }
  }
  return out;
}

bool schedule_is_feasible(const std::vector<Step>& steps, const energy::HarvestTrace& trace,
                          const energy::EnergyConfig& cfg, std::uint64_t channel_seed) {
  device::Device dev(cfg, nn::QNetwork{}, channel_seed);
  std::size_t next = 0;
  for (Step t = 1; t <= static_cast<Step>(trace.steps()); ++t) {
    const bool due = next < steps.size() && steps[next] == t;
    const auto act = dev.sense_and_act(
        t, trace, [due](Step, const StateVector&) { return due ? Action::kTransmit : Action::kWait; });
    if (!act.awake || act.insufficient_energy) return false;
    if (due) {
      if (!act.tx_attempted) return false;
      ++next;
    }
  }
  return true;
}

IdealSchedule ideal_uniform_schedule(const energy::HarvestTrace& trace, const energy::EnergyConfig& cfg,
                                     std::uint64_t channel_seed) {
  const int per_day = cfg.steps_per_day();
  const auto total = static_cast<Step>(trace.steps());
  auto feasible = [&](int n) {
    return schedule_is_feasible(uniform_steps(n, per_day, total), trace, cfg, channel_seed);
  };
  if (!feasible(0)) return {};
  int lo = 0;
  int hi = per_day;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return IdealSchedule{lo, uniform_steps(lo, per_day, total)};
}

double System::epsilon_at(Step t) const {
  return epsilon_override ? *epsilon_override : epsilon.at(t - 1);
}

namespace {

device::Decider drl_decider(System& sys) {
  return [&sys](Step t, const StateVector& s) {
    return dqn::select_action(sys.device.cached(), s, sys.epsilon_at(t), sys.decision_rng);
  };
}

// Shared front half of every policy step: sense/act, downtime, delivery and
// one sink step.
StepRecord act_and_deliver(System& sys, Step t, const energy::HarvestTrace& trace,
                           const device::Decider& decide) {
  sys.sink.begin_step(t);
  const device::ActOutcome act = sys.device.sense_and_act(t, trace, decide);
  sys.sink.aoi().note_downtime(act.insufficient_energy);

  StepRecord rec;
  rec.step = t;
  rec.harvest_a = trace.at(t);
  rec.insufficient_energy = act.insufficient_energy;
  rec.tx_attempted = act.tx_attempted;
  rec.tx_success = act.tx_succeeded;
  if (act.awake) {
    rec.action = to_index(act.action);
    rec.reward = sys.sink.reward_at(t, act.action, act.state.energy_j);
  } else {
    rec.reward = std::numeric_limits<double>::quiet_NaN();
  }
  if (act.delivered) rec.experiences = sys.sink.ingest_update(*act.delivered, t);
  rec.loss = sys.sink.sink_step(t).loss;
  return rec;
}

void finish(System& sys, StepRecord& rec) {
  rec.energy_j = sys.device.energy().stored_j();
  rec.aoi_steps = sys.sink.aoi().age();
}

}  // namespace

StepRecord split_drl_step(System& sys, Step t, const energy::HarvestTrace& trace) {
  StepRecord rec = act_and_deliver(sys, t, trace, drl_decider(sys));
  if (sys.device.offer_weights(t, sys.sink.pending_blob())) {
    sys.sink.mark_delivered();
    rec.weight_install = true;
  }
  finish(sys, rec);
  return rec;
}

StepRecord unconstrained_drl_step(System& sys, Step t, const energy::HarvestTrace& trace) {
  StepRecord rec = act_and_deliver(sys, t, trace, drl_decider(sys));
  if (sys.device.install_free(t, sys.sink.pending_blob())) {
    sys.sink.mark_delivered();
    rec.weight_install = true;
  }
  finish(sys, rec);
  return rec;
}

StepRecord threshold_step(System& sys, Step t, const energy::HarvestTrace& trace) {
  const double capacity = sys.device.energy().capacity_j();
  StepRecord rec = act_and_deliver(sys, t, trace, [&sys, capacity](Step, const StateVector& s) {
    return threshold_decide(s.energy_j, capacity, sys.decision_rng);
  });
  finish(sys, rec);
  return rec;
}

StepRecord ideal_uniform_step(System& sys, Step t, const energy::HarvestTrace& trace) {
  const bool due = static_cast<std::size_t>(t) < sys.scheduled.size() && sys.scheduled[t];
  StepRecord rec = act_and_deliver(sys, t, trace, [due](Step, const StateVector&) {
    return due ? Action::kTransmit : Action::kWait;
  });
  finish(sys, rec);
  return rec;
}

StepRecord step(System& sys, Step t, const energy::HarvestTrace& trace) {
  switch (sys.kind) {
    case PolicyKind::kSplitDrl: return split_drl_step(sys, t, trace);
    case PolicyKind::kUnconstrainedDrl: return unconstrained_drl_step(sys, t, trace);
    case PolicyKind::kThreshold: return threshold_step(sys, t, trace);
    case PolicyKind::kIdealUniform: return ideal_uniform_step(sys, t, trace);
  }
  throw std::logic_error("unknown policy");
}

}  // namespace ehdrl::policies
