#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ehdrl/policies.hpp"
#include "ehdrl/run_config.hpp"

namespace ehdrl::harness {

// Per-run metrics. AoI in minutes, downtime in hours.
struct RunSummary {
  std::string policy;
  std::string profile;
  double capacitance_farads = 0.0;
  std::uint64_t seed = 0;
  int days = 0;
  int train_days = 0;
  std::vector<double> daily_avg_aoi_min;
  double avg_aoi_min = 0.0;
  std::optional<double> eval_avg_aoi_min;
  double peak_aoi_min = 0.0;
  double downtime_hours = 0.0;
  double tx_per_day = 0.0;
  double installs_per_day = 0.0;
  double final_energy_j = 0.0;
  double ledger_residual_j = 0.0;
  std::int64_t train_steps = 0;
  std::int64_t target_syncs = 0;
  std::optional<int> ideal_per_day;
};

struct RunResult {
  RunSummary summary;
  std::vector<policies::StepRecord> steps;
};

struct RunOptions {
  bool write_outputs = true;
  bool keep_steps = true;
};

// Seed streams derived from RunConfig::seed.
enum SeedStream : std::uint64_t { kNetworkInit = 0, kDecisions = 1, kChannel = 2, kSink = 3, kTrace = 4 };

energy::HarvestTrace make_trace(const RunConfig& cfg);

// Builds the device/sink pair for cfg, including the ideal-uniform schedule.
policies::System make_system(const RunConfig& cfg, const energy::HarvestTrace& trace);

// Deterministic for a fixed config. Writes timeseries.csv and summary.json
// into cfg.out_dir when requested. Throws ConfigError for invalid configs,
// std::runtime_error when the output directory is unusable and
// std::logic_error if the energy ledger identity is violated.
RunResult run(const RunConfig& cfg, const RunOptions& options = {});

// One summary per config in input order; runs are spread over `jobs`
// threads. Writes sweep.csv into out_dir when given.
std::vector<RunSummary> sweep(const std::vector<RunConfig>& cfgs, int jobs = 1,
                              const std::optional<std::filesystem::path>& out_dir = {});

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<policies::StepRecord>& steps,
                          double step_seconds);
void write_summary_json(const std::filesystem::path& path, const RunSummary& s);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<RunSummary>& rows);

}  // namespace ehdrl::harness
