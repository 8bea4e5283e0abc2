#include "ehdrl/dqn.hpp"

#include <algorithm>
#include <stdexcept>

namespace ehdrl::dqn {

double EpsilonSchedule::at(std::int64_t step) const {
  if (decay_steps <= 0 || step >= decay_steps) return end;
  const double frac = static_cast<double>(std::max<std::int64_t>(step, 0)) /
                      static_cast<double>(decay_steps);
  return start + (end - start) * frac;
}

void DqnConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (batch_size < 2) throw std::invalid_argument("batch_size must be at least 2");
  if (batch_size > memory_capacity) {
    throw std::invalid_argument("batch_size must not exceed memory_capacity");
  }
  if (target_sync_period <= 0) throw std::invalid_argument("target_sync_period must be positive");
  for (double e : {epsilon.start, epsilon.end}) {
    if (e < 0.0 || e > 1.0) throw std::invalid_argument("epsilon values must lie in [0, 1]");
  }
  if (!(adam.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
}

Action greedy_action(const Eigen::RowVectorXd& q_values) {
  return q_values(1) > q_values(0) ? Action::kTransmit : Action::kWait;
}

Action select_action(const nn::QNetwork& net, const StateVector& s, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) {
    return rng.below(2) == 0 ? Action::kWait : Action::kTransmit;
  }
  const Eigen::MatrixXd q = net.infer(s.row());
  return greedy_action(q.row(0));
}

double train_on_batch(nn::QNetwork& policy, const nn::QNetwork& target,
                      const std::vector<Experience>& batch, double gamma, nn::AdamState& opt,
                      Rng& rng) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd states(n, StateVector::kWidth);
  Eigen::MatrixXd next_states(n, StateVector::kWidth);
  for (Eigen::Index j = 0; j < n; ++j) {
    states.row(j) = batch[j].state.row();
    next_states.row(j) = batch[j].next_state.row();
  }

  const Eigen::MatrixXd next_q = target.infer(next_states);
  Eigen::VectorXd y(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double bootstrap = batch[j].terminal ? 0.0 : next_q.row(j).maxCoeff();
    y(j) = batch[j].reward + gamma * bootstrap;
  }

  auto [q, cache] = policy.forward(states, nn::Mode::kTrain, rng);
  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(n, q.cols());
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const int a = to_index(batch[j].action);
    const double err = q(j, a) - y(j);
    loss += err * err;
    dq(j, a) = 2.0 * err / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);

  const nn::Gradients grads = policy.backward(cache, dq);
  nn::adam_step(policy, grads, opt);
  return loss;
}

std::optional<double> train_step(nn::QNetwork& policy, const nn::QNetwork& target,
                                 const ReplayMemory& memory, const DqnConfig& cfg,
                                 nn::AdamState& opt, Rng& rng) {
  if (memory.size() < cfg.batch_size) return std::nullopt;
  const std::vector<Experience> batch = memory.sample(cfg.batch_size, rng);
  return train_on_batch(policy, target, batch, cfg.gamma, opt, rng);
}

void sync_target(const nn::QNetwork& policy, nn::QNetwork& target) {
  target.copy_state_from(policy);
}

}  // namespace ehdrl::dqn
