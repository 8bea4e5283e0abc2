#include "ehdrl/harness.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "ehdrl/weight_blob.hpp"

namespace ehdrl::harness {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string fmt_real(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

energy::HarvestTrace make_trace(const RunConfig& cfg) {
  const auto steps = static_cast<std::size_t>(cfg.days) * cfg.steps_per_day();
  if (cfg.trace_path) {
    auto trace = energy::load_trace(*cfg.trace_path, cfg.lux_coeff);
    if (trace.steps() < steps) {
      throw ConfigError("trace " + cfg.trace_path->string() + " has " + std::to_string(trace.steps()) +
                        " steps, run needs " + std::to_string(steps));
    }
    trace.current_a.resize(steps);
    return trace;
  }
  return energy::synth_trace(cfg.profile, cfg.days, derive_seed(cfg.seed, kTrace), cfg.energy, cfg.synth);
}

policies::System make_system(const RunConfig& cfg, const energy::HarvestTrace& trace) {
  const nn::QNetwork initial = nn::QNetwork::init(derive_seed(cfg.seed, kNetworkInit), cfg.net);
  // The device holds the transfer-precision copy of the shared initial weights.
  nn::QNetwork cached = nn::deserialize(nn::serialize(initial), cfg.net);

  sink::SinkConfig sink_cfg;
  sink_cfg.dqn = cfg.dqn;
  sink_cfg.reward = cfg.reward;
  sink_cfg.capacity_j = cfg.energy.capacity_j();
  sink_cfg.buffer_len = cfg.energy.buffer_len;
  sink_cfg.aoi_window = cfg.steps_per_day();

  policies::System sys{
      cfg.policy,
      device::Device(cfg.energy, std::move(cached), derive_seed(cfg.seed, kChannel), cfg.effective_t_ann()),
      sink::Sink(sink_cfg, initial, derive_seed(cfg.seed, kSink)),
      Rng(derive_seed(cfg.seed, kDecisions)),
      cfg.dqn.epsilon,
      std::nullopt,
      {}};
  const bool drl = cfg.policy == policies::PolicyKind::kSplitDrl ||
                   cfg.policy == policies::PolicyKind::kUnconstrainedDrl;
  sys.sink.set_learning(drl && cfg.effective_train_days() > 0);
  if (cfg.policy == policies::PolicyKind::kIdealUniform) {
    const auto schedule =
        policies::ideal_uniform_schedule(trace, cfg.energy, derive_seed(cfg.seed, kChannel));
    sys.scheduled.assign(trace.steps() + 1, false);
    for (Step t : schedule.steps) sys.scheduled[static_cast<std::size_t>(t)] = true;
  }
  return sys;
}

RunResult run(const RunConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const energy::HarvestTrace trace = make_trace(cfg);
  policies::System sys = make_system(cfg, trace);

  const int per_day = cfg.steps_per_day();
  const Step total = static_cast<Step>(cfg.days) * per_day;
  const Step eval_start = static_cast<Step>(cfg.effective_train_days()) * per_day + 1;
  const bool drl = cfg.policy == policies::PolicyKind::kSplitDrl ||
                   cfg.policy == policies::PolicyKind::kUnconstrainedDrl;

  RunResult result;
  if (options.keep_steps) result.steps.reserve(static_cast<std::size_t>(total));
  std::int64_t tx = 0;
  std::int64_t installs = 0;
  for (Step t = 1; t <= total; ++t) {
    if (t == eval_start) {
      sys.epsilon_override = cfg.eval_epsilon;
      sys.sink.set_learning(drl && cfg.learn_during_eval);
    }
    policies::StepRecord rec = policies::step(sys, t, trace);
    tx += rec.tx_attempted ? 1 : 0;
    installs += rec.weight_install ? 1 : 0;
    if (options.keep_steps) result.steps.push_back(std::move(rec));
  }

  const auto& aoi = sys.sink.aoi();
  const double minutes_per_step = cfg.energy.step_seconds / 60.0;
  RunSummary& s = result.summary;
  s.policy = std::string(policies::to_string(cfg.policy));
  s.profile = cfg.trace_path ? "file" : std::string(energy::to_string(cfg.profile));
  s.capacitance_farads = cfg.energy.capacitance_farads;
  s.seed = cfg.seed;
  s.days = cfg.days;
  s.train_days = cfg.effective_train_days();
  for (int d = 0; d < cfg.days; ++d) {
    s.daily_avg_aoi_min.push_back(
        aoi.average_aoi(static_cast<Step>(d) * per_day + 1, static_cast<Step>(d + 1) * per_day) *
        minutes_per_step);
  }
  s.avg_aoi_min = aoi.average_aoi(total) * minutes_per_step;
  if (eval_start <= total) s.eval_avg_aoi_min = aoi.average_aoi(eval_start, total) * minutes_per_step;
  s.peak_aoi_min = aoi.peak_aoi() * minutes_per_step;
  s.downtime_hours = static_cast<double>(aoi.downtime_steps()) * cfg.energy.step_seconds / 3600.0;
  s.tx_per_day = static_cast<double>(tx) / cfg.days;
  s.installs_per_day = static_cast<double>(installs) / cfg.days;
  s.final_energy_j = sys.device.energy().stored_j();
  s.ledger_residual_j = sys.device.energy().ledger_residual_j();
  s.train_steps = sys.sink.train_steps();
  s.target_syncs = sys.sink.target_syncs();
  if (cfg.policy == policies::PolicyKind::kIdealUniform) {
    s.ideal_per_day = static_cast<int>(std::count(sys.scheduled.begin(), sys.scheduled.end(), true) /
                                       std::max(1, cfg.days));
  }

  if (std::abs(s.ledger_residual_j) > 1e-9) {
    throw std::logic_error("energy ledger identity violated by " + std::to_string(s.ledger_residual_j) + " J");
  }

  if (options.write_outputs) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + cfg.out_dir.string());
    if (options.keep_steps) {
      write_timeseries_csv(cfg.out_dir / "timeseries.csv", result.steps, cfg.energy.step_seconds);
    }
    write_summary_json(cfg.out_dir / "summary.json", s);
  }
  return result;
}

std::vector<RunSummary> sweep(const std::vector<RunConfig>& cfgs, int jobs,
                              const std::optional<std::filesystem::path>& out_dir) {
  for (const auto& c : cfgs) c.validate();
  std::vector<RunSummary> rows(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      rows[i] = run(cfgs[i], RunOptions{out_dir.has_value(), out_dir.has_value()}).summary;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    worker();
  }
  if (out_dir) write_sweep_csv(*out_dir / "sweep.csv", rows);
  return rows;
}

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<policies::StepRecord>& steps,
                          double step_seconds) {
  auto out = open_for_write(path);
  const double minutes_per_step = step_seconds / 60.0;
  out << "step,E,I_EH,Delta,action,tx_success,reward,loss,weight_install\n";
  for (const auto& r : steps) {
    out << r.step << ',' << fmt_real(r.energy_j) << ',' << fmt_real(r.harvest_a) << ','
        << fmt_real(static_cast<double>(r.aoi_steps) * minutes_per_step) << ',' << r.action << ','
        << (r.tx_success ? 1 : 0) << ',' << fmt_real(r.reward) << ','
        << (r.loss ? fmt_real(*r.loss) : std::string{}) << ',' << (r.weight_install ? 1 : 0) << '\n';
  }
}

void write_summary_json(const std::filesystem::path& path, const RunSummary& s) {
  nlohmann::ordered_json j;
  j["policy"] = s.policy;
  j["profile"] = s.profile;
  j["capacitance_farads"] = s.capacitance_farads;
  j["seed"] = s.seed;
  j["days"] = s.days;
  j["train_days"] = s.train_days;
  j["daily_avg_aoi_min"] = s.daily_avg_aoi_min;
  j["avg_aoi_min"] = s.avg_aoi_min;
  j["eval_avg_aoi_min"] = s.eval_avg_aoi_min ? nlohmann::ordered_json(*s.eval_avg_aoi_min) : nullptr;
  j["peak_aoi_min"] = s.peak_aoi_min;
  j["downtime_hours"] = s.downtime_hours;
  j["tx_per_day"] = s.tx_per_day;
  j["installs_per_day"] = s.installs_per_day;
  j["final_energy_j"] = s.final_energy_j;
  j["train_steps"] = s.train_steps;
  j["target_syncs"] = s.target_syncs;
  j["ideal_per_day"] = s.ideal_per_day ? nlohmann::ordered_json(*s.ideal_per_day) : nullptr;
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<RunSummary>& rows) {
  auto out = open_for_write(path);
  out << "policy,profile,capacitance_farads,seed,avg_aoi_min,eval_avg_aoi_min,peak_aoi_min,"
         "downtime_hours,tx_per_day,installs_per_day,final_energy_j\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << r.profile << ',' << fmt_real(r.capacitance_farads) << ',' << r.seed << ','
        << fmt_real(r.avg_aoi_min) << ',' << (r.eval_avg_aoi_min ? fmt_real(*r.eval_avg_aoi_min) : "") << ','
        << fmt_real(r.peak_aoi_min) << ',' << fmt_real(r.downtime_hours) << ',' << fmt_real(r.tx_per_day)
        << ',' << fmt_real(r.installs_per_day) << ',' << fmt_real(r.final_energy_j) << '\n';
  }
}

}  // namespace ehdrl::harness
