#include "ehdrl/harvest_trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ehdrl/rng.hpp"

namespace ehdrl::energy {

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::kLow: return "low";
    case Profile::kMedium: return "medium";
    case Profile::kHigh: return "high";
  }
  return "unknown";
}

std::optional<Profile> parse_profile(std::string_view text) {
  if (text == "low") return Profile::kLow;
  if (text == "medium") return Profile::kMedium;
  if (text == "high") return Profile::kHigh;
  return std::nullopt;
}

double daily_target_j(Profile p) {
  switch (p) {
    case Profile::kLow: return 6.0;
    case Profile::kMedium: return 14.0;
    case Profile::kHigh: return 20.0;
  }
  return 0.0;
}

double HarvestTrace::at(Step t) const {
  if (t < 1 || static_cast<std::size_t>(t) > current_a.size()) {
    throw std::out_of_range("step " + std::to_string(t) + " outside harvest trace of " +
                            std::to_string(current_a.size()) + " steps");
  }
  return current_a[static_cast<std::size_t>(t - 1)];
}

HarvestTrace synth_trace(Profile profile, int days, std::uint64_t seed, const EnergyConfig& cfg,
                         const SynthOptions& options) {
  if (days < 1) throw std::invalid_argument("synthetic trace needs at least one day");
  if (!(options.daylight_hours > 0.0 && options.daylight_hours <= 24.0)) {
    throw std::invalid_argument("daylight_hours must lie in (0, 24]");
  }
  const int per_day = cfg.steps_per_day();
  const double sunrise = 12.0 - options.daylight_hours / 2.0;
  const double joules_per_amp_step = cfg.supply_voltage * cfg.step_seconds;
  Rng rng(seed);

  HarvestTrace trace;
  trace.profile = profile;
  trace.current_a.reserve(static_cast<std::size_t>(per_day) * days);
  std::vector<double> day(per_day);
  for (int d = 0; d < days; ++d) {
    double total = 0.0;
    for (int k = 0; k < per_day; ++k) {
      const double hour = (k + 0.5) * cfg.step_seconds / 3600.0;
      const double phase = (hour - sunrise) / options.daylight_hours;
      double shape = 0.0;
      if (phase > 0.0 && phase < 1.0) {
        shape = std::sin(std::numbers::pi * phase) * (1.0 + options.noise_frac * rng.uniform(-1.0, 1.0));
      }
      day[k] = std::max(shape, 0.0);
      total += day[k];
    }
    const double scale = daily_target_j(profile) / (total * joules_per_amp_step);
    for (double v : day) trace.current_a.push_back(v * scale);
  }
  return trace;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool split_pair(const std::string& line, std::string& a, std::string& b) {
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) return false;
  a = trim(line.substr(0, comma));
  b = trim(line.substr(comma + 1));
  return !a.empty() && !b.empty();
}

double parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw TraceError(path.string() + ":" + std::to_string(line) + ": malformed number '" + text + "'");
  }
  return v;
}

}  // namespace

HarvestTrace load_trace(const std::filesystem::path& path, std::optional<double> lux_coeff) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file " + path.string());

  std::string line;
  std::size_t lineno = 0;
  std::string header;
  while (std::getline(in, line)) {
    ++lineno;
    header = trim(line);
    if (!header.empty()) break;
  }
  if (header.empty()) throw TraceError(path.string() + ": empty trace file");

  std::string col_a;
  std::string col_b;
  split_pair(header, col_a, col_b);
  const bool lux = col_a == "timestamp" && col_b == "lux";
  if (!lux && !(col_a == "step" && col_b == "current_amps")) {
    throw TraceError(path.string() + ": expected header 'step,current_amps' or 'timestamp,lux'");
  }
  if (lux && !(lux_coeff && *lux_coeff > 0.0)) {
    throw TraceError(path.string() + ": lux traces need a positive lux-to-current coefficient");
  }

  HarvestTrace trace;
  std::optional<double> prev_step;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = trim(line);
    if (row.empty()) continue;
    std::string a;
    std::string b;
    if (!split_pair(row, a, b)) {
      throw TraceError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    }
    const double value = parse_number(b, path, lineno);
    if (!lux) {
      // lux rows: the timestamp column is not interpreted, one row per step
      const double key = parse_number(a, path, lineno);
      if (prev_step && key != *prev_step + 1.0) {
        throw TraceError(path.string() + ":" + std::to_string(lineno) + ": steps must be consecutive");
      }
      prev_step = key;
    }
    if (value < 0.0) {
      throw TraceError(path.string() + ":" + std::to_string(lineno) + ": negative " +
                       (lux ? "illuminance" : "current"));
    }
    trace.current_a.push_back(lux ? value * *lux_coeff : value);
  }
  if (trace.current_a.empty()) throw TraceError(path.string() + ": trace has no rows");
  return trace;
}

double trace_energy_j(const HarvestTrace& trace, const EnergyConfig& cfg, std::size_t first,
                      std::size_t count) {
  if (first + count > trace.steps()) throw std::out_of_range("energy window outside trace");
  double sum = 0.0;
  for (std::size_t i = first; i < first + count; ++i) sum += trace.current_a[i];
  return sum * cfg.supply_voltage * cfg.step_seconds;
}

}  // namespace ehdrl::energy
