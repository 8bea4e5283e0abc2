#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ehdrl/dqn.hpp"
#include "ehdrl/energy.hpp"
#include "ehdrl/harvest_trace.hpp"
#include "ehdrl/policies.hpp"
#include "ehdrl/q_network.hpp"
#include "ehdrl/reward.hpp"

namespace ehdrl::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything needed for one deterministic run.
struct RunConfig {
  policies::PolicyKind policy = policies::PolicyKind::kSplitDrl;
  energy::Profile profile = energy::Profile::kMedium;
  int days = 17;
  int train_days = 10;
  std::uint64_t seed = 1;
  int updates_per_day = 1;
  std::optional<int> t_ann_steps;  // overrides updates_per_day
  double eval_epsilon = 0.05;
  bool learn_during_eval = false;

  energy::EnergyConfig energy;
  energy::SynthOptions synth;
  sink::RewardParams reward;
  dqn::DqnConfig dqn;
  nn::NetworkOptions net;

  std::optional<std::filesystem::path> trace_path;
  std::optional<double> lux_coeff;
  std::filesystem::path out_dir = "out";

  int steps_per_day() const { return energy.steps_per_day(); }
  int effective_train_days() const { return std::min(train_days, days); }
  int effective_t_ann() const;

  void validate() const;
};

// Lists for the dimensions a sweep can vary. Empty means "use the base".
struct SweepAxes {
  std::vector<policies::PolicyKind> policies;
  std::vector<energy::Profile> profiles;
  std::vector<double> capacitances;
};

// Applies one `key = value` setting. Keys `policy`, `profile` and
// `capacitance_farads` accept comma- or space-separated lists, which are
// stored in `axes`. Throws ConfigError for unknown keys and bad values.
void apply_setting(RunConfig& cfg, SweepAxes& axes, std::string_view key, std::string_view value);

// Flat text file: one `key = value` per line, `#` starts a comment.
void load_config_file(const std::filesystem::path& path, RunConfig& cfg, SweepAxes& axes);

// Cartesian product in policy-major, then profile, then ascending
// capacitance order. Each run gets its own output subdirectory when the
// sweep has more than one entry.
std::vector<RunConfig> expand(const RunConfig& base, const SweepAxes& axes);

std::vector<std::string> known_keys();

}  // namespace ehdrl::harness
