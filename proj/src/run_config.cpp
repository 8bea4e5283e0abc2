#include "ehdrl/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ehdrl/device.hpp"

namespace ehdrl::harness {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::string text(value);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string item; in >> item;) out.push_back(item);
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  const std::string text = trim(value);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + text + "'");
  }
  return v;
}

std::int64_t to_int(std::string_view key, std::string_view value) {
  const std::string text = trim(value);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + text + "'");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view value) {
  const std::string text = trim(value);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': '" + text + "'");
}

using Setter = std::function<void(RunConfig&, SweepAxes&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> m;
    auto real = [&m](const char* key, auto member_fn) {
      m[key] = [member_fn](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
        member_fn(c) = to_double(k, v);
      };
    };
    auto millijoule = [&m](const char* key, auto member_fn) {
      m[key] = [member_fn](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
        member_fn(c) = to_double(k, v) * 1e-3;
      };
    };
    auto integer = [&m](const char* key, auto member_fn) {
      m[key] = [member_fn](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
        member_fn(c) = static_cast<std::remove_reference_t<decltype(member_fn(c))>>(to_int(k, v));
      };
    };

    m["policy"] = [](RunConfig& c, SweepAxes& a, std::string_view k, std::string_view v) {
      a.policies.clear();
      for (const auto& item : split_list(v)) {
        auto p = policies::parse_policy(item);
        if (!p) throw ConfigError("unknown " + std::string(k) + " '" + item + "'");
        a.policies.push_back(*p);
      }
      if (a.policies.empty()) throw ConfigError("empty policy list");
      c.policy = a.policies.front();
    };
    m["profile"] = [](RunConfig& c, SweepAxes& a, std::string_view k, std::string_view v) {
      a.profiles.clear();
      for (const auto& item : split_list(v)) {
        auto p = energy::parse_profile(item);
        if (!p) throw ConfigError("unknown " + std::string(k) + " '" + item + "'");
        a.profiles.push_back(*p);
      }
      if (a.profiles.empty()) throw ConfigError("empty profile list");
      c.profile = a.profiles.front();
    };
    m["capacitance_farads"] = [](RunConfig& c, SweepAxes& a, std::string_view k, std::string_view v) {
      a.capacitances.clear();
      for (const auto& item : split_list(v)) {
        const double f = to_double(k, item);
        if (!(f > 0.0)) throw ConfigError("capacitance_farads values must be positive");
        a.capacitances.push_back(f);
      }
      if (a.capacitances.empty()) throw ConfigError("empty capacitance list");
      c.energy.capacitance_farads = a.capacitances.front();
    };
    m["seed"] = [](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
      const auto s = to_int(k, v);
      if (s < 0) throw ConfigError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    m["learn_during_eval"] = [](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
      c.learn_during_eval = to_bool(k, v);
    };
    m["t_ann_steps"] = [](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
      c.t_ann_steps = static_cast<int>(to_int(k, v));
    };
    m["trace"] = [](RunConfig& c, SweepAxes&, std::string_view, std::string_view v) {
      c.trace_path = trim(v);
    };
    m["lux_coeff"] = [](RunConfig& c, SweepAxes&, std::string_view k, std::string_view v) {
      c.lux_coeff = to_double(k, v);
    };
    m["out"] = [](RunConfig& c, SweepAxes&, std::string_view, std::string_view v) {
      c.out_dir = trim(v);
    };

    integer("days", [](RunConfig& c) -> int& { return c.days; });
    integer("train_days", [](RunConfig& c) -> int& { return c.train_days; });
    integer("updates_per_day", [](RunConfig& c) -> int& { return c.updates_per_day; });
    real("eval_epsilon", [](RunConfig& c) -> double& { return c.eval_epsilon; });

    real("supply_voltage", [](RunConfig& c) -> double& { return c.energy.supply_voltage; });
    millijoule("e_m_mj", [](RunConfig& c) -> double& { return c.energy.sense_j; });
    millijoule("e_ann_mj", [](RunConfig& c) -> double& { return c.energy.ann_update_j; });
    millijoule("e_tr_min_mj", [](RunConfig& c) -> double& { return c.energy.tx_min_j; });
    millijoule("e_tr_max_mj", [](RunConfig& c) -> double& { return c.energy.tx_max_j; });
    integer("buffer_len", [](RunConfig& c) -> int& { return c.energy.buffer_len; });
    real("eta", [](RunConfig& c) -> double& { return c.energy.success_prob; });
    real("step_seconds", [](RunConfig& c) -> double& { return c.energy.step_seconds; });
    real("initial_charge_frac", [](RunConfig& c) -> double& { return c.energy.initial_charge_frac; });
    real("daylight_hours", [](RunConfig& c) -> double& { return c.synth.daylight_hours; });
    real("noise_frac", [](RunConfig& c) -> double& { return c.synth.noise_frac; });

    real("aoi_scale", [](RunConfig& c) -> double& { return c.reward.aoi_scale; });
    real("tx_bonus_slope", [](RunConfig& c) -> double& { return c.reward.tx_bonus_slope; });
    real("aoi_knee", [](RunConfig& c) -> double& { return c.reward.aoi_knee; });
    real("tx_base", [](RunConfig& c) -> double& { return c.reward.tx_base; });
    real("energy_penalty", [](RunConfig& c) -> double& { return c.reward.energy_penalty; });
    real("energy_threshold_frac", [](RunConfig& c) -> double& { return c.reward.energy_threshold_frac; });

    integer("batch_size", [](RunConfig& c) -> std::size_t& { return c.dqn.batch_size; });
    integer("memory_capacity", [](RunConfig& c) -> std::size_t& { return c.dqn.memory_capacity; });
    real("gamma", [](RunConfig& c) -> double& { return c.dqn.gamma; });
    integer("target_sync_period", [](RunConfig& c) -> std::int64_t& { return c.dqn.target_sync_period; });
    real("eps_start", [](RunConfig& c) -> double& { return c.dqn.epsilon.start; });
    real("eps_end", [](RunConfig& c) -> double& { return c.dqn.epsilon.end; });
    integer("eps_decay_steps", [](RunConfig& c) -> std::int64_t& { return c.dqn.epsilon.decay_steps; });
    real("learning_rate", [](RunConfig& c) -> double& { return c.dqn.adam.learning_rate; });
    real("adam_beta1", [](RunConfig& c) -> double& { return c.dqn.adam.beta1; });
    real("adam_beta2", [](RunConfig& c) -> double& { return c.dqn.adam.beta2; });
    real("adam_epsilon", [](RunConfig& c) -> double& { return c.dqn.adam.epsilon; });
    real("dropout_rate", [](RunConfig& c) -> double& { return c.net.dropout_rate; });
    real("bn_momentum", [](RunConfig& c) -> double& { return c.net.bn_momentum; });
    real("bn_epsilon", [](RunConfig& c) -> double& { return c.net.bn_epsilon; });
    return m;
  }();
  return table;
}

}  // namespace

int RunConfig::effective_t_ann() const {
  return t_ann_steps ? *t_ann_steps : device::t_ann_steps(updates_per_day);
}

void RunConfig::validate() const {
  if (days < 1) throw ConfigError("days must be at least 1");
  if (train_days < 0) throw ConfigError("train_days must be non-negative");
  if (!t_ann_steps && (updates_per_day < 1 || updates_per_day > 3)) {
    throw ConfigError("updates_per_day must be 1, 2 or 3");
  }
  if (t_ann_steps && *t_ann_steps < 0) throw ConfigError("t_ann_steps must be non-negative");
  if (eval_epsilon < 0.0 || eval_epsilon > 1.0) throw ConfigError("eval_epsilon must lie in [0, 1]");
  try {
    energy.validate();
    dqn.validate();
    nn::QNetwork probe(net);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (net.layer_dims.front() != StateVector::kWidth || net.layer_dims.back() != 2) {
    throw ConfigError("network must map 3 state features to 2 action values");
  }
}

void apply_setting(RunConfig& cfg, SweepAxes& axes, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(trim(key));
  if (it == table.end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  it->second(cfg, axes, it->first, value);
}

void load_config_file(const std::filesystem::path& path, RunConfig& cfg, SweepAxes& axes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_setting(cfg, axes, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::vector<RunConfig> expand(const RunConfig& base, const SweepAxes& axes) {
  auto policies = axes.policies.empty() ? std::vector{base.policy} : axes.policies;
  auto profiles = axes.profiles.empty() ? std::vector{base.profile} : axes.profiles;
  auto caps = axes.capacitances.empty() ? std::vector{base.energy.capacitance_farads} : axes.capacitances;
  std::sort(caps.begin(), caps.end());

  std::vector<RunConfig> out;
  const bool many = policies.size() * profiles.size() * caps.size() > 1;
  for (auto p : policies) {
    for (auto prof : profiles) {
      for (double c : caps) {
        RunConfig cfg = base;
        cfg.policy = p;
        cfg.profile = prof;
        cfg.energy.capacitance_farads = c;
        if (many) {
          std::ostringstream name;
          name << policies::to_string(p) << "_" << energy::to_string(prof) << "_" << c << "F";
          cfg.out_dir = base.out_dir / name.str();
        }
        out.push_back(std::move(cfg));
      }
    }
  }
  return out;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace ehdrl::harness
