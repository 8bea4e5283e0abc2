#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ehdrl/types.hpp"

namespace ehdrl::aoi {

// Sink-side age process Delta(t) = t - G(t) sampled once per step, with the
// peak, reception and downtime bookkeeping needed for the summary metrics.
//
// Per step t the owner calls tick(t) first, then receive(t, g) for any
// update delivered during t. The stored sample for t is the age after those
// receptions.
class AoIProcess {
 public:
  static constexpr int kDefaultWindow = 720;

  explicit AoIProcess(int window = kDefaultWindow);

  // Advances to step t; t must be exactly one past the previous step.
  void tick(Step t);

  // Delivers an update generated at g during the current step. Updates not
  // newer than the freshest one received are counted as stale and ignored.
  // Returns whether the update was accepted.
  bool receive(Step t, Step generated);

  void note_downtime(bool insufficient);

  Step now() const { return now_; }
  Step age() const { return now_ - generation_; }
  Step last_generation() const { return generation_; }

  const std::vector<Step>& peaks() const { return peaks_; }
  std::size_t receptions() const { return peaks_.size(); }
  std::size_t stale_updates() const { return stale_; }
  Step downtime_steps() const { return downtime_; }

  // Delta(t) for 1 <= t <= now().
  Step sample(Step t) const;

  // Mean of Delta(1..horizon).
  double average_aoi(Step horizon) const;
  // Mean of Delta(first..last), inclusive.
  double average_aoi(Step first, Step last) const;
  // Mean of the recorded peaks; 0 before the first reception.
  double peak_aoi() const;

  int window() const { return window_; }
  // Number of samples currently inside the rolling window.
  std::size_t window_size() const;
  // Mean of the most recent window samples (Delta(now-window+1 .. now)).
  double window_mean() const;
  // Past-day mean seen by an experience at step t: the mean of
  // Delta(t-window .. t-1) once a full window precedes t, otherwise 0.
  double past_window_mean(Step t) const;

 private:
  int window_;
  Step now_ = 0;
  Step generation_ = 0;
  std::vector<Step> peaks_;
  std::size_t stale_ = 0;
  Step downtime_ = 0;
  std::vector<Step> samples_;
  std::vector<std::int64_t> prefix_{0};  // prefix_[i] = sum of samples_[0 .. i)
};

}  // namespace ehdrl::aoi
