#pragma once

#include "ehdrl/types.hpp"

namespace ehdrl::sink {

struct RewardParams {
  double aoi_scale = 0.1;
  double tx_bonus_slope = 2.5;
  double aoi_knee = 40.0;
  double tx_base = 2.0;
  double energy_penalty = -1000.0;
  double energy_threshold_frac = 0.15;
};

// Action part: waiting earns 1 - scale*mean_aoi; transmitting earns
// tx_base - scale*mean_aoi plus slope*(knee - mean_aoi) while mean_aoi <= knee.
// Energy part: energy_penalty whenever energy_j <= threshold_frac * capacity_j.
double reward(Action a, double mean_aoi, double energy_j, double capacity_j,
              const RewardParams& p = {});

}  // namespace ehdrl::sink
