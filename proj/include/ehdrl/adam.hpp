#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "ehdrl/q_network.hpp"

namespace ehdrl::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction over a flat parameter vector.
class AdamState {
 public:
  AdamState(Eigen::Index size, AdamOptions options = {});

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  std::int64_t steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }

 private:
  AdamOptions options_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  std::int64_t steps_ = 0;
};

void adam_step(QNetwork& net, const Gradients& grads, AdamState& opt);

}  // namespace ehdrl::nn
