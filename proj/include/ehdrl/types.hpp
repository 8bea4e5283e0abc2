#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

namespace ehdrl {

// Simulation step index. Steps are numbered from 1; step 0 is the instant
// before the first slot.
using Step = std::int64_t;

enum class Action : std::uint8_t { kWait = 0, kTransmit = 1 };

inline int to_index(Action a) { return static_cast<int>(a); }

// Agent observation: stored energy (J), age of information (steps) and
// harvesting current (A).
struct StateVector {
  double energy_j = 0.0;
  double aoi_steps = 0.0;
  double harvest_a = 0.0;

  static constexpr int kWidth = 3;

  Eigen::RowVector3d row() const { return {energy_j, aoi_steps, harvest_a}; }
  bool finite() const {
    return std::isfinite(energy_j) && std::isfinite(aoi_steps) && std::isfinite(harvest_a);
  }
  friend bool operator==(const StateVector&, const StateVector&) = default;
};

}  // namespace ehdrl
