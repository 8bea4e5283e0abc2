#include "ehdrl/energy.hpp"

#include <stdexcept>
#include <string>

namespace ehdrl::energy {

void EnergyConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(capacitance_farads, "capacitance_farads");
  positive(supply_voltage, "supply_voltage");
  positive(sense_j, "e_m_mj");
  positive(tx_min_j, "e_tr_min_mj");
  positive(tx_max_j, "e_tr_max_mj");
  positive(step_seconds, "step_seconds");
  if (ann_update_j < 0.0) throw std::invalid_argument("e_ann_mj must be non-negative");
  if (tx_min_j > tx_max_j) throw std::invalid_argument("e_tr_min_mj must not exceed e_tr_max_mj");
  if (buffer_len < 1) throw std::invalid_argument("buffer length must be at least 1");
  if (success_prob < 0.0 || success_prob > 1.0) throw std::invalid_argument("eta must lie in [0, 1]");
  if (initial_charge_frac < 0.0 || initial_charge_frac > 1.0) {
    throw std::invalid_argument("initial_charge_frac must lie in [0, 1]");
  }
}

double tx_cost(const EnergyConfig& cfg, int observations) {
  if (observations < 1 || observations > cfg.buffer_len) {
    throw std::out_of_range("status update must carry 1.." + std::to_string(cfg.buffer_len) +
                            " observations, got " + std::to_string(observations));
  }
  if (cfg.buffer_len == 1) return cfg.tx_max_j;
  const double step = (cfg.tx_max_j - cfg.tx_min_j) / (cfg.buffer_len - 1);
  return cfg.tx_min_j + (observations - 1) * step;
}

EnergyState::EnergyState(double capacity_j, double initial_j)
    : capacity_j_(capacity_j), stored_j_(initial_j), initial_j_(initial_j) {
  if (!(capacity_j > 0.0)) throw std::invalid_argument("capacity must be positive");
  if (initial_j < 0.0 || initial_j > capacity_j) {
    throw std::invalid_argument("initial charge must lie within [0, capacity]");
  }
}

EnergyState EnergyState::initial(const EnergyConfig& cfg) {
  return EnergyState(cfg.capacity_j(), cfg.initial_charge_frac * cfg.capacity_j());
}

double EnergyState::harvest(const EnergyConfig& cfg, double current_a) {
  if (current_a < 0.0) throw std::invalid_argument("harvest current must be non-negative");
  harvest_a_ = current_a;
  const double income = cfg.supply_voltage * current_a * cfg.step_seconds;
  const long double headroom = capacity_j_ - stored_j_;
  long double credited = income;
  if (income >= headroom) {
    credited = headroom;
    stored_j_ = capacity_j_;
  } else {
    stored_j_ += income;
  }
  harvested_j_ += credited;
  return static_cast<double>(credited);
}

bool EnergyState::debit(double amount_j) {
  if (stored_j_ < amount_j) return false;
  stored_j_ -= amount_j;
  debited_j_ += amount_j;
  return true;
}

}  // namespace ehdrl::energy
