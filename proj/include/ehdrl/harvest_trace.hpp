#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ehdrl/energy.hpp"
#include "ehdrl/types.hpp"

namespace ehdrl::energy {

enum class Profile { kLow, kMedium, kHigh };

std::string_view to_string(Profile p);
std::optional<Profile> parse_profile(std::string_view text);
// Average energy harvested per day: 6, 14 and 20 J.
double daily_target_j(Profile p);

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Harvesting current per step. Index 0 belongs to simulation step 1.
struct HarvestTrace {
  std::vector<double> current_a;
  std::optional<Profile> profile;  // unset for traces loaded from file

  std::size_t steps() const { return current_a.size(); }
  double at(Step t) const;
};

struct SynthOptions {
  double daylight_hours = 12.0;
  double noise_frac = 0.10;
};

// Half-sine daylight centred on solar noon with multiplicative noise, each
// day rescaled so its harvested energy equals the profile target exactly.
// The trace starts at midnight.
HarvestTrace synth_trace(Profile profile, int days, std::uint64_t seed, const EnergyConfig& cfg,
                         const SynthOptions& options = {});

// Reads `step,current_amps` or `timestamp,lux` CSV (one row per step).
// Lux values are converted with `lux_coeff` amperes per lux.
HarvestTrace load_trace(const std::filesystem::path& path, std::optional<double> lux_coeff = {});

// Joules harvested over steps [first, first + count) ignoring the capacitor bound.
double trace_energy_j(const HarvestTrace& trace, const EnergyConfig& cfg, std::size_t first,
                      std::size_t count);

}  // namespace ehdrl::energy
