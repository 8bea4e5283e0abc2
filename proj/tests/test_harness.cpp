#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ehdrl/harness.hpp"

using namespace ehdrl;
using namespace ehdrl::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ehdrl_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("settings parse into the config") {
  RunConfig cfg;
  SweepAxes axes;
  apply_setting(cfg, axes, "e_ann_mj", "450");
  apply_setting(cfg, axes, "eta", "0.8");
  apply_setting(cfg, axes, "target_sync_period", "50");
  apply_setting(cfg, axes, "aoi_knee", "30");
  apply_setting(cfg, axes, "dropout_rate", "0.2");
  apply_setting(cfg, axes, "capacitance_farads", "4, 6 5");
  apply_setting(cfg, axes, "policy", "threshold,ideal-uniform");
  CHECK(cfg.energy.ann_update_j == doctest::Approx(0.45));
  CHECK(cfg.energy.success_prob == 0.8);
  CHECK(cfg.dqn.target_sync_period == 50);
  CHECK(cfg.reward.aoi_knee == 30.0);
  CHECK(cfg.net.dropout_rate == 0.2);
  CHECK(axes.capacitances == std::vector<double>{4.0, 6.0, 5.0});
  CHECK(axes.policies.size() == 2);
  CHECK_THROWS_AS(apply_setting(cfg, axes, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, axes, "days", "ten"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, axes, "profile", "extreme"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, axes, "capacitance_farads", "-4"), ConfigError);
}

TEST_CASE("config files") {
  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "# comment\npolicy = threshold\n\ndays = 3 # trailing\nseed=9\n";
  RunConfig cfg;
  SweepAxes axes;
  load_config_file(dir / "run.cfg", cfg, axes);
  const auto runs = expand(cfg, axes);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0].policy == policies::PolicyKind::kThreshold);
  CHECK(runs[0].days == 3);
  CHECK(runs[0].seed == 9);
  std::ofstream(dir / "bad.cfg") << "days 3\n";
  CHECK_THROWS_AS(load_config_file(dir / "bad.cfg", cfg, axes), ConfigError);
  CHECK_THROWS_AS(load_config_file(dir / "missing.cfg", cfg, axes), ConfigError);
}

TEST_CASE("invalid configs are refused") {
  RunConfig cfg;
  cfg.days = 0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.energy.capacitance_farads = 0.0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("every tunable constant is a key") {
  const auto keys = known_keys();
  for (const char* k : {"e_m_mj", "e_ann_mj", "e_tr_min_mj", "e_tr_max_mj", "eta", "step_seconds",
                        "initial_charge_frac", "capacitance_farads", "profile", "gamma",
                        "target_sync_period", "eps_start", "eps_end", "eps_decay_steps", "learning_rate",
                        "batch_size", "memory_capacity", "aoi_knee", "energy_penalty", "bn_momentum"}) {
    CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
  }
}

TEST_CASE("sweep expansion order and cardinality") {
  RunConfig base;
  base.out_dir = "sweep";
  SweepAxes axes;
  apply_setting(base, axes, "policy", "split-drl,unconstrained-drl,threshold,ideal-uniform");
  apply_setting(base, axes, "profile", "low,medium,high");
  apply_setting(base, axes, "capacitance_farads", "10 9 8 7 6 5 4");
  const auto runs = expand(base, axes);
  REQUIRE(runs.size() == 84);
  CHECK(runs[0].policy == policies::PolicyKind::kSplitDrl);
  CHECK(runs[0].profile == energy::Profile::kLow);
  CHECK(runs[0].energy.capacitance_farads == 4.0);
  CHECK(runs[6].energy.capacitance_farads == 10.0);
  CHECK(runs[7].profile == energy::Profile::kMedium);
  CHECK(runs[21].policy == policies::PolicyKind::kUnconstrainedDrl);
  std::set<std::filesystem::path> dirs;
  for (const auto& r : runs) dirs.insert(r.out_dir);
  CHECK(dirs.size() == 84);
}

TEST_CASE("runs are byte-for-byte reproducible") {
  RunConfig cfg;
  cfg.days = 2;
  cfg.train_days = 1;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  cfg.out_dir = a;
  run(cfg);
  cfg.out_dir = b;
  run(cfg);
  const auto csv_a = slurp(a / "timeseries.csv");
  CHECK(csv_a.size() > 1000);
  CHECK(csv_a == slurp(b / "timeseries.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("output files") {
  RunConfig cfg;
  cfg.days = 2;
  cfg.train_days = 1;
  cfg.out_dir = scratch("out");
  const auto result = run(cfg);
  std::ifstream csv(cfg.out_dir / "timeseries.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "step,E,I_EH,Delta,action,tx_success,reward,loss,weight_install");
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 1440);

  const auto j = nlohmann::json::parse(slurp(cfg.out_dir / "summary.json"));
  CHECK(j["policy"] == "split-drl");
  CHECK(j["daily_avg_aoi_min"].size() == 2);
  CHECK(j["downtime_hours"].get<double>() >= 0.0);
  CHECK(j["eval_avg_aoi_min"].is_number());
  const auto& s = result.summary;
  for (double v : {s.avg_aoi_min, s.peak_aoi_min, s.downtime_hours, s.tx_per_day, s.installs_per_day,
                   s.final_energy_j}) {
    CHECK(std::isfinite(v));
  }
  CHECK(std::abs(s.ledger_residual_j) <= 1e-9);
  // AoI is reported in minutes: the first sample is one step old.
  CHECK(result.steps[0].aoi_steps == 1);
}

TEST_CASE("unwritable output directory") {
  const auto dir = scratch("blocked");
  std::filesystem::create_directories(dir.parent_path());
  std::ofstream(dir) << "a file, not a directory";
  RunConfig cfg;
  cfg.days = 1;
  cfg.policy = policies::PolicyKind::kThreshold;
  cfg.out_dir = dir / "sub";
  CHECK_THROWS_AS(run(cfg), std::runtime_error);
  std::filesystem::remove(dir);
}

TEST_CASE("ideal uniform never goes down") {
  for (auto p : {energy::Profile::kLow, energy::Profile::kMedium, energy::Profile::kHigh}) {
    RunConfig cfg;
    cfg.policy = policies::PolicyKind::kIdealUniform;
    cfg.profile = p;
    cfg.days = 3;
    const auto s = run(cfg, RunOptions{false, false}).summary;
    CHECK(s.downtime_hours == 0.0);
    REQUIRE(s.ideal_per_day.has_value());
    CHECK(s.tx_per_day == doctest::Approx(*s.ideal_per_day));
  }
}

TEST_CASE("target sync cadence inside a run") {
  RunConfig cfg;
  cfg.days = 3;
  cfg.train_days = 3;
  const auto s = run(cfg, RunOptions{false, false}).summary;
  CHECK(s.train_steps > 1000);
  CHECK(s.target_syncs == s.train_steps / 100);
}

TEST_CASE("one-day sweep of every combination") {
  RunConfig base;
  base.days = 1;
  SweepAxes axes;
  apply_setting(base, axes, "policy", "split-drl,unconstrained-drl,threshold,ideal-uniform");
  apply_setting(base, axes, "profile", "low,medium,high");
  apply_setting(base, axes, "capacitance_farads", "4 5 6 7 8 9 10");
  const auto dir = scratch("sweep");
  base.out_dir = dir;
  const auto start = std::chrono::steady_clock::now();
  const auto rows = sweep(expand(base, axes), 1, dir);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(rows.size() == 84);
  CHECK(seconds < 60.0);
  std::ifstream csv(dir / "sweep.csv");
  std::size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 85);
  CHECK(rows[0].policy == "split-drl");
  CHECK(rows[83].policy == "ideal-uniform");
  CHECK(rows[83].capacitance_farads == 10.0);
}
