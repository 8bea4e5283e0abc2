#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ehdrl/q_network.hpp"
#include "ehdrl/rng.hpp"

namespace oracle {

// Age process recomputed from scratch: Delta(t) = t - max{g : (r, g) delivered at r <= t},
// only counting updates fresher than everything received before them.
struct Event {
  std::int64_t received;
  std::int64_t generated;
};

struct AoIReference {
  std::vector<std::int64_t> samples;  // samples[t-1] = Delta(t)
  std::vector<std::int64_t> peaks;
  std::size_t stale = 0;
};

inline AoIReference brute_force_aoi(const std::vector<Event>& events, std::int64_t horizon) {
  AoIReference ref;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    std::int64_t freshest_before = 0;
    for (const auto& e : events) {
      if (e.received < t) freshest_before = std::max(freshest_before, e.generated);
    }
    std::int64_t g = freshest_before;
    for (const auto& e : events) {
      if (e.received != t) continue;
      if (e.generated > g) {
        ref.peaks.push_back(t - g);
        g = e.generated;
      } else {
        ++ref.stale;
      }
    }
    ref.samples.push_back(t - g);
  }
  return ref;
}

inline double mean(const std::vector<std::int64_t>& v, std::size_t first, std::size_t last) {
  std::int64_t s = 0;
  for (std::size_t i = first; i < last; ++i) s += v[i];
  return static_cast<double>(s) / static_cast<double>(last - first);
}

// Reward written out case by case.
inline double reward(int action, double mean_aoi, double energy, double capacity) {
  double r;
  if (action == 0) {
    r = 1.0 - mean_aoi / 10.0;
  } else if (mean_aoi <= 40.0) {
    r = 2.5 * (40.0 - mean_aoi) + 2.0 - mean_aoi / 10.0;
  } else {
    r = 2.0 - mean_aoi / 10.0;
  }
  if (energy <= 0.15 * capacity) r += -1000.0;
  return r;
}

// Central finite-difference check of QNetwork::backward on a random network
// and batch. The scalar loss is sum(G .* Q) with the dropout masks pinned by
// reseeding the generator before every forward pass. When a perturbation
// moves a ReLU pre-activation across zero the difference quotient straddles
// a kink; the step is then halved until both probes keep the unperturbed
// activation pattern.
struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t compared = 0;
  std::size_t reduced_step = 0;
};

inline GradCheck finite_difference_check(std::uint64_t seed, int batch_rows = 8, double h = 1e-5,
                                         double floor = 1e-3) {
  using ehdrl::nn::Mode;
  using ehdrl::nn::QNetwork;
  ehdrl::Rng setup(seed);
  QNetwork net = QNetwork::init(seed);
  Eigen::VectorXd theta = net.parameters();
  const auto& layout = net.layout();
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] += setup.uniform(-0.3, 0.3);
  for (int j = 0; j < net.input_width(); ++j) {
    theta[layout.gamma_offset + j] = setup.uniform(0.5, 1.5);
    theta[layout.beta_offset + j] = setup.uniform(-0.5, 0.5);
  }
  net.set_parameters(theta);

  Eigen::MatrixXd batch(batch_rows, 3);
  for (int r = 0; r < batch_rows; ++r) {
    batch(r, 0) = setup.uniform(0.0, 18.0);
    batch(r, 1) = setup.uniform(0.0, 200.0);
    batch(r, 2) = setup.uniform(0.0, 2e-4);
  }
  Eigen::MatrixXd g(batch_rows, net.output_width());
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = setup.uniform(-1.0, 1.0);
  const std::uint64_t mask_seed = setup.next();

  using Pattern = std::vector<bool>;
  auto probe_at = [&](const Eigen::VectorXd& params, Pattern& pattern) {
    QNetwork probe = net;
    probe.set_parameters(params);
    ehdrl::Rng rng(mask_seed);
    const auto r = probe.forward(batch, Mode::kTrain, rng);
    pattern.clear();
    for (std::size_t l = 0; l + 1 < r.cache.pre_activations.size(); ++l) {
      const auto& z = r.cache.pre_activations[l];
      for (Eigen::Index k = 0; k < z.size(); ++k) pattern.push_back(z.data()[k] > 0.0);
    }
    return (r.q_values.array() * g.array()).sum();
  };

  Pattern base;
  probe_at(theta, base);
  QNetwork work = net;
  ehdrl::Rng rng(mask_seed);
  const auto fwd = work.forward(batch, Mode::kTrain, rng);
  const Eigen::VectorXd analytic = work.backward(fwd.cache, g).values;

  GradCheck out;
  Pattern p_plus;
  Pattern p_minus;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    double step = h;
    double numeric = 0.0;
    for (;;) {
      Eigen::VectorXd plus = theta;
      Eigen::VectorXd minus = theta;
      plus[i] += step;
      minus[i] -= step;
      numeric = (probe_at(plus, p_plus) - probe_at(minus, p_minus)) / (2.0 * step);
      if ((p_plus == base && p_minus == base) || step < h * 1e-4) break;
      step *= 0.5;
    }
    out.reduced_step += step < h;
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    out.max_rel_error = std::max(out.max_rel_error, std::abs(analytic[i] - numeric) / denom);
    ++out.compared;
  }
  return out;
}

}  // namespace oracle
