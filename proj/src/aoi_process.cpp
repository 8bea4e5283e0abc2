#include "ehdrl/aoi_process.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ehdrl::aoi {

AoIProcess::AoIProcess(int window) : window_(window) {
  if (window < 1) throw std::invalid_argument("AoI window must be positive");
}

void AoIProcess::tick(Step t) {
  if (t != now_ + 1) {
    throw std::logic_error("AoI tick at step " + std::to_string(t) + " after step " +
                           std::to_string(now_));
  }
  now_ = t;
  samples_.push_back(now_ - generation_);
  prefix_.push_back(prefix_.back() + samples_.back());
}

bool AoIProcess::receive(Step t, Step generated) {
  if (t != now_ || now_ == 0) throw std::logic_error("reception outside the current step");
  if (generated > t) throw std::logic_error("update generated in the future");
  if (generated <= generation_) {
    ++stale_;
    return false;
  }
  peaks_.push_back(now_ - generation_);
  generation_ = generated;
  samples_.back() = now_ - generation_;
  prefix_.back() = prefix_[prefix_.size() - 2] + samples_.back();
  return true;
}

void AoIProcess::note_downtime(bool insufficient) {
  if (insufficient) ++downtime_;
}

Step AoIProcess::sample(Step t) const {
  if (t < 1 || t > now_) throw std::out_of_range("no AoI sample for step " + std::to_string(t));
  return samples_[static_cast<std::size_t>(t - 1)];
}

double AoIProcess::average_aoi(Step horizon) const { return average_aoi(1, horizon); }

double AoIProcess::average_aoi(Step first, Step last) const {
  if (first < 1 || last < first || last > now_) {
    throw std::invalid_argument("empty or out-of-range AoI horizon");
  }
  const auto sum = prefix_[static_cast<std::size_t>(last)] - prefix_[static_cast<std::size_t>(first - 1)];
  return static_cast<double>(sum) / static_cast<double>(last - first + 1);
}

double AoIProcess::peak_aoi() const {
  if (peaks_.empty()) return 0.0;
  const auto sum = std::accumulate(peaks_.begin(), peaks_.end(), std::int64_t{0});
  return static_cast<double>(sum) / static_cast<double>(peaks_.size());
}

std::size_t AoIProcess::window_size() const {
  return static_cast<std::size_t>(std::min<Step>(now_, window_));
}

double AoIProcess::window_mean() const {
  if (now_ == 0) return 0.0;
  return average_aoi(now_ - static_cast<Step>(window_size()) + 1, now_);
}

double AoIProcess::past_window_mean(Step t) const {
  if (t - 1 < window_) return 0.0;
  return average_aoi(t - window_, t - 1);
}

}  // namespace ehdrl::aoi
