#include "ehdrl/reward.hpp"

namespace ehdrl::sink {

double reward(Action a, double mean_aoi, double energy_j, double capacity_j, const RewardParams& p) {
  double r_action = 0.0;
  if (a == Action::kWait) {
    r_action = 1.0 - p.aoi_scale * mean_aoi;
  } else if (mean_aoi <= p.aoi_knee) {
    r_action = p.tx_bonus_slope * (p.aoi_knee - mean_aoi) + p.tx_base - p.aoi_scale * mean_aoi;
  } else {
    r_action = p.tx_base - p.aoi_scale * mean_aoi;
  }
  const double r_energy = energy_j <= p.energy_threshold_frac * capacity_j ? p.energy_penalty : 0.0;
  return r_action + r_energy;
}

}  // namespace ehdrl::sink
