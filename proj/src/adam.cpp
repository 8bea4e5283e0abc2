#include "ehdrl/adam.hpp"

#include <cmath>

namespace ehdrl::nn {

AdamState::AdamState(Eigen::Index size, AdamOptions options)
    : options_(options), m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {}

void AdamState::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw DimensionError("Adam state, parameters and gradient must have equal sizes");
  }
  ++steps_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  m_ = b1 * m_ + (1.0 - b1) * grad;
  v_ = b2 * v_ + (1.0 - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  params.array() -= options_.learning_rate * (m_.array() / c1) /
                    ((v_.array() / c2).sqrt() + options_.epsilon);
}

void adam_step(QNetwork& net, const Gradients& grads, AdamState& opt) {
  Eigen::VectorXd params = net.parameters();
  opt.step(params, grads.values);
  net.set_parameters(params);
}

}  // namespace ehdrl::nn
