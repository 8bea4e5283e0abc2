#pragma once

#include <cstdint>

namespace ehdrl::energy {

// Device energy parameters. Joule quantities are per event; the capacitor
// size is given in farads and converted to a joule bound at supply_voltage.
struct EnergyConfig {
  double capacitance_farads = 4.0;
  double supply_voltage = 3.0;
  double sense_j = 1.5e-3;       // E_M, per awake step
  double ann_update_j = 0.9;     // E_ANN, per weight download
  double tx_min_j = 35e-3;       // one buffered observation
  double tx_max_j = 100e-3;      // a full buffer
  int buffer_len = 4;            // M
  double step_seconds = 120.0;
  double success_prob = 0.9;     // eta
  double initial_charge_frac = 0.5;

  double capacity_j() const { return 0.5 * capacitance_farads * supply_voltage * supply_voltage; }
  int steps_per_day() const { return static_cast<int>(86400.0 / step_seconds + 0.5); }

  void validate() const;
};

// Energy of a status update carrying `observations` records, interpolated
// linearly between tx_min_j (1 record) and tx_max_j (buffer_len records).
// Throws std::out_of_range outside [1, buffer_len].
double tx_cost(const EnergyConfig& cfg, int observations);

// Capacitor charge with a running ledger of everything credited and debited.
class EnergyState {
 public:
  EnergyState(double capacity_j, double initial_j);
  static EnergyState initial(const EnergyConfig& cfg);

  double stored_j() const { return static_cast<double>(stored_j_); }
  double capacity_j() const { return capacity_j_; }
  double harvest_a() const { return harvest_a_; }

  // Credits supply_voltage * current * step_seconds, clamped at capacity.
  // Returns the joules actually stored.
  double harvest(const EnergyConfig& cfg, double current_a);

  // Succeeds iff stored >= amount; otherwise leaves the state unchanged.
  [[nodiscard]] bool debit(double amount_j);

  double initial_j() const { return static_cast<double>(initial_j_); }
  double harvested_total_j() const { return static_cast<double>(harvested_j_); }
  double debited_total_j() const { return static_cast<double>(debited_j_); }
  // stored - (initial + harvested - debited); zero up to rounding.
  double ledger_residual_j() const {
    return static_cast<double>(stored_j_ - (initial_j_ + harvested_j_ - debited_j_));
  }

 private:
  double capacity_j_;
  // Extended precision keeps the ledger identity tight over long runs.
  long double stored_j_;
  long double initial_j_;
  double harvest_a_ = 0.0;
  long double harvested_j_ = 0.0L;
  long double debited_j_ = 0.0L;
};

}  // namespace ehdrl::energy
