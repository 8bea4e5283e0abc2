#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ehdrl/device.hpp"
#include "ehdrl/dqn.hpp"
#include "ehdrl/energy.hpp"
#include "ehdrl/harvest_trace.hpp"
#include "ehdrl/rng.hpp"
#include "ehdrl/sink.hpp"

namespace ehdrl::policies {

enum class PolicyKind { kSplitDrl, kUnconstrainedDrl, kThreshold, kIdealUniform };

std::string_view to_string(PolicyKind p);
std::optional<PolicyKind> parse_policy(std::string_view text);

// Transmit with probability energy / capacity.
Action threshold_decide(double energy_j, double capacity_j, Rng& rng);

struct IdealSchedule {
  int per_day = 0;
  std::vector<Step> steps;  // ascending
};

// Transmit steps for `per_day` updates spaced evenly through every day of a
// trace of `total_steps` steps.
std::vector<Step> uniform_steps(int per_day, int steps_per_day, Step total_steps);

// Oracle baseline: the largest per-day count whose evenly spaced schedule,
// simulated over the whole trace with the run's channel seed, never leaves
// the device short of the energy to send its buffer. Empty when even zero
// transmissions cause downtime.
IdealSchedule ideal_uniform_schedule(const energy::HarvestTrace& trace, const energy::EnergyConfig& cfg,
                                     std::uint64_t channel_seed);

// Simulates a fixed schedule; true iff the device never slept, never lacked
// transmit energy and sent at every scheduled step.
bool schedule_is_feasible(const std::vector<Step>& steps, const energy::HarvestTrace& trace,
                          const energy::EnergyConfig& cfg, std::uint64_t channel_seed);

// Everything that runs in one simulation: the device half, the sink half
// and the decision stream for the active policy.
struct System {
  PolicyKind kind = PolicyKind::kSplitDrl;
  device::Device device;
  sink::Sink sink;
  Rng decision_rng;
  dqn::EpsilonSchedule epsilon;
  std::optional<double> epsilon_override;  // evaluation phase
  std::vector<bool> scheduled;             // ideal uniform, indexed by step

  double epsilon_at(Step t) const;
};

struct StepRecord {
  Step step = 0;
  double energy_j = 0.0;   // after every debit of the step
  double harvest_a = 0.0;
  Step aoi_steps = 0;      // sink-side Delta(t)
  int action = -1;         // -1 while asleep
  bool tx_attempted = false;
  bool tx_success = false;
  double reward = 0.0;     // NaN while asleep
  std::optional<double> loss;
  bool weight_install = false;
  bool insufficient_energy = false;
  std::size_t experiences = 0;
};

// One time step of each policy. The DRL steps share the device/sink order:
// sense and act, deliver, train, then the weight-download phase.
StepRecord split_drl_step(System& sys, Step t, const energy::HarvestTrace& trace);
StepRecord unconstrained_drl_step(System& sys, Step t, const energy::HarvestTrace& trace);
StepRecord threshold_step(System& sys, Step t, const energy::HarvestTrace& trace);
StepRecord ideal_uniform_step(System& sys, Step t, const energy::HarvestTrace& trace);

StepRecord step(System& sys, Step t, const energy::HarvestTrace& trace);

}  // namespace ehdrl::policies
