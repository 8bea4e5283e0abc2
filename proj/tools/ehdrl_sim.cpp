#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "ehdrl/harness.hpp"

namespace {

std::string join(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ehdrl::harness;

  CLI::App app{"Energy-harvesting sensor simulator with split deep-Q learning"};
  std::string config_path;
  std::vector<std::string> policies;
  std::vector<std::string> profiles;
  std::vector<std::string> capacitances;
  std::string days;
  std::string updates_per_day;
  std::string seed;
  std::string trace;
  std::string lux_coeff;
  std::string out;
  std::vector<std::string> overrides;
  int jobs = 1;

  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--policy", policies, "split-drl, unconstrained-drl, threshold, ideal-uniform");
  app.add_option("--profile", profiles, "low, medium, high");
  app.add_option("--capacitance", capacitances, "capacitor size(s) in farads");
  app.add_option("--days", days, "total simulated days (training + evaluation)");
  app.add_option("--updates-per-day", updates_per_day, "weight updates per day: 1, 2 or 3");
  app.add_option("--seed", seed, "experiment seed");
  app.add_option("--trace", trace, "harvest trace CSV");
  app.add_option("--lux-coeff", lux_coeff, "amps per lux for timestamp,lux traces");
  app.add_option("--out", out, "output directory");
  app.add_option("--set", overrides, "extra key=value overrides");
  app.add_option("--jobs", jobs, "parallel runs in a sweep")->check(CLI::PositiveNumber);
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "print every config key and exit");

  CLI11_PARSE(app, argc, argv);

  if (list_keys) {
    for (const auto& k : known_keys()) std::cout << k << '\n';
    return 0;
  }

  try {
    RunConfig cfg;
    SweepAxes axes;
    if (!config_path.empty()) load_config_file(config_path, cfg, axes);
    if (!policies.empty()) apply_setting(cfg, axes, "policy", join(policies));
    if (!profiles.empty()) apply_setting(cfg, axes, "profile", join(profiles));
    if (!capacitances.empty()) apply_setting(cfg, axes, "capacitance_farads", join(capacitances));
    if (!days.empty()) apply_setting(cfg, axes, "days", days);
    if (!updates_per_day.empty()) apply_setting(cfg, axes, "updates_per_day", updates_per_day);
    if (!seed.empty()) apply_setting(cfg, axes, "seed", seed);
    if (!trace.empty()) apply_setting(cfg, axes, "trace", trace);
    if (!lux_coeff.empty()) apply_setting(cfg, axes, "lux_coeff", lux_coeff);
    if (!out.empty()) apply_setting(cfg, axes, "out", out);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, axes, kv.substr(0, eq), kv.substr(eq + 1));
    }

    const auto runs = expand(cfg, axes);
    if (runs.size() == 1) {
      const auto result = run(runs.front());
      const auto& s = result.summary;
      std::cout << s.policy << ' ' << s.profile << " C=" << s.capacitance_farads << "F  avg AoI "
                << s.avg_aoi_min << " min, peak " << s.peak_aoi_min << " min, T_down " << s.downtime_hours
                << " h, tx/day " << s.tx_per_day << '\n'
                << "wrote " << (runs.front().out_dir / "timeseries.csv").string() << " and summary.json\n";
    } else {
      const auto rows = sweep(runs, jobs, cfg.out_dir);
      std::cout << rows.size() << " runs, wrote " << (cfg.out_dir / "sweep.csv").string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
