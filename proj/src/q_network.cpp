#include "ehdrl/q_network.hpp"

#include <atomic>
#include <cmath>

namespace ehdrl::nn {

namespace {

// Revisions are unique across all instances, so a cache can only ever match
// the exact parameter state it was computed from.
std::uint64_t next_revision() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

void validate_options(const NetworkOptions& options) {
  if (options.layer_dims.size() < 2) {
    throw DimensionError("layer_dims needs at least an input and an output width");
  }
  for (int d : options.layer_dims) {
    if (d <= 0) throw DimensionError("layer_dims entries must be positive");
  }
  if (options.dropout_rate < 0.0 || options.dropout_rate >= 1.0) {
    throw std::invalid_argument("dropout_rate must lie in [0, 1)");
  }
}

}  // namespace

ParameterLayout ParameterLayout::for_dims(const std::vector<int>& dims) {
  ParameterLayout layout;
  Eigen::Index offset = 0;
  layout.gamma_offset = offset;
  offset += dims.front();
  layout.beta_offset = offset;
  offset += dims.front();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    layout.weight_offset.push_back(offset);
    offset += static_cast<Eigen::Index>(dims[l]) * dims[l + 1];
    layout.bias_offset.push_back(offset);
    offset += dims[l + 1];
  }
  layout.size = offset;
  return layout;
}

QNetwork::QNetwork(NetworkOptions options)
    : options_(std::move(options)) {
  validate_options(options_);
  layout_ = ParameterLayout::for_dims(options_.layer_dims);
  params_ = Eigen::VectorXd::Zero(layout_.size);
  params_.segment(layout_.gamma_offset, input_width()).setOnes();
  running_mean_ = Eigen::VectorXd::Zero(input_width());
  running_var_ = Eigen::VectorXd::Ones(input_width());
  revision_ = next_revision();
}

QNetwork QNetwork::init(std::uint64_t seed, NetworkOptions options) {
  QNetwork net(std::move(options));
  Rng rng(seed);
  const auto& dims = net.layer_dims();
  for (std::size_t l = 0; l < net.linear_layers(); ++l) {
    const double limit = std::sqrt(6.0 / dims[l]);
    const Eigen::Index count = static_cast<Eigen::Index>(dims[l]) * dims[l + 1];
    for (Eigen::Index i = 0; i < count; ++i) {
      net.params_[net.layout_.weight_offset[l] + i] = rng.uniform(-limit, limit);
    }
  }
  net.revision_ = next_revision();
  return net;
}

void QNetwork::check_width(const Eigen::MatrixXd& batch) const {
  if (batch.cols() != input_width()) {
    throw DimensionError("expected " + std::to_string(input_width()) +
                         " state features per row, got " + std::to_string(batch.cols()));
  }
  if (batch.rows() == 0) throw DimensionError("empty batch");
}

bool QNetwork::dropout_after(std::size_t hidden) const {
  // Hidden layers are 0 .. linear_layers()-2; dropout sits between them,
  // not between the last hidden layer and the output.
  return options_.dropout_rate > 0.0 && hidden + 2 < linear_layers();
}

Eigen::MatrixXd QNetwork::normalise_infer(const Eigen::MatrixXd& batch) const {
  const Eigen::RowVectorXd inv_std =
      (running_var_.array() + options_.bn_epsilon).rsqrt().matrix().transpose();
  Eigen::MatrixXd xhat = batch.rowwise() - running_mean_.transpose();
  xhat.array().rowwise() *= inv_std.array();
  return xhat;
}

ForwardResult QNetwork::forward(const Eigen::MatrixXd& batch, Mode mode, Rng& rng) {
  check_width(batch);
  if (mode == Mode::kInfer) {
    return ForwardResult{infer(batch), ForwardCache{}};
  }
  const Eigen::Index n = batch.rows();
  if (n < 2) {
    throw DimensionError("Train-mode forward needs at least 2 samples for batch statistics");
  }

  ForwardCache cache;
  const Eigen::RowVectorXd mean = batch.colwise().mean();
  const Eigen::MatrixXd centred = batch.rowwise() - mean;
  const Eigen::RowVectorXd var = centred.array().square().colwise().mean();
  cache.inv_std = (var.array() + options_.bn_epsilon).rsqrt();
  cache.xhat = centred;
  cache.xhat.array().rowwise() *= cache.inv_std.array();

  const double m = options_.bn_momentum;
  const double unbias = static_cast<double>(n) / static_cast<double>(n - 1);
  running_mean_ = m * running_mean_ + (1.0 - m) * mean.transpose();
  running_var_ = m * running_var_ + (1.0 - m) * unbias * var.transpose();

  Eigen::MatrixXd act = cache.xhat;
  act.array().rowwise() *= bn_gamma().transpose().array();
  act.rowwise() += bn_beta().transpose();

  const double keep = 1.0 - options_.dropout_rate;
  const std::size_t layers = linear_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    cache.layer_inputs.push_back(act);
    Eigen::MatrixXd z = act * weight(l).transpose();
    z.rowwise() += bias(l).transpose();
    cache.pre_activations.push_back(z);
    if (l + 1 == layers) {
      act = std::move(z);
      break;
    }
    act = z.cwiseMax(0.0);
    if (dropout_after(l)) {
      Eigen::MatrixXd mask(act.rows(), act.cols());
      for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        for (Eigen::Index i = 0; i < mask.rows(); ++i) {
          mask(i, j) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
        }
      }
      act.array() *= mask.array();
      cache.masks.push_back(std::move(mask));
    } else {
      cache.masks.emplace_back();
    }
  }
  revision_ = next_revision();
  cache.revision = revision_;
  return ForwardResult{std::move(act), std::move(cache)};
}

Eigen::MatrixXd QNetwork::infer(const Eigen::MatrixXd& batch) const {
  check_width(batch);
  Eigen::MatrixXd act = normalise_infer(batch);
  act.array().rowwise() *= bn_gamma().transpose().array();
  act.rowwise() += bn_beta().transpose();
  const std::size_t layers = linear_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = act * weight(l).transpose();
    z.rowwise() += bias(l).transpose();
    act = (l + 1 == layers) ? std::move(z) : Eigen::MatrixXd(z.cwiseMax(0.0));
  }
  return act;
}

Gradients QNetwork::backward(const ForwardCache& cache, const Eigen::MatrixXd& dloss_dq) const {
  if (cache.revision != revision_ || cache.layer_inputs.size() != linear_layers()) {
    throw CacheMismatch("forward cache does not belong to the current parameters");
  }
  if (dloss_dq.rows() != cache.xhat.rows() || dloss_dq.cols() != output_width()) {
    throw DimensionError("dLoss/dQ shape does not match the cached batch");
  }

  Gradients grads{Eigen::VectorXd::Zero(layout_.size)};
  Eigen::MatrixXd dz = dloss_dq;
  Eigen::MatrixXd dact;
  for (std::size_t l = linear_layers(); l-- > 0;) {
    const auto out = static_cast<Eigen::Index>(options_.layer_dims[l + 1]);
    const auto in = static_cast<Eigen::Index>(options_.layer_dims[l]);
    Eigen::Map<Eigen::MatrixXd>(grads.values.data() + layout_.weight_offset[l], out, in) =
        dz.transpose() * cache.layer_inputs[l];
    grads.values.segment(layout_.bias_offset[l], out) = dz.colwise().sum().transpose();
    dact = dz * weight(l);
    if (l == 0) break;
    const std::size_t hidden = l - 1;
    if (cache.masks[hidden].size() != 0) {
      dact.array() *= cache.masks[hidden].array();
    }
    dz = dact.array() * (cache.pre_activations[hidden].array() > 0.0).cast<double>();
  }

  // Batch-norm backward through the batch statistics. The input gradient is
  // not needed since the state features are not trainable.
  const int width = input_width();
  grads.values.segment(layout_.gamma_offset, width) =
      (dact.array() * cache.xhat.array()).colwise().sum().transpose();
  grads.values.segment(layout_.beta_offset, width) = dact.colwise().sum().transpose();
  return grads;
}

void QNetwork::set_parameters(const Eigen::VectorXd& params) {
  if (params.size() != layout_.size) {
    throw DimensionError("parameter vector has " + std::to_string(params.size()) +
                         " entries, expected " + std::to_string(layout_.size));
  }
  params_ = params;
  revision_ = next_revision();
}

void QNetwork::set_running_stats(const Eigen::VectorXd& mean, const Eigen::VectorXd& var) {
  if (mean.size() != input_width() || var.size() != input_width()) {
    throw DimensionError("running statistics must have one entry per input feature");
  }
  if ((var.array() < 0.0).any()) {
    throw std::invalid_argument("running variance must be non-negative");
  }
  running_mean_ = mean;
  running_var_ = var;
  revision_ = next_revision();
}

Eigen::Map<const Eigen::MatrixXd> QNetwork::weight(std::size_t layer) const {
  return {params_.data() + layout_.weight_offset.at(layer), options_.layer_dims[layer + 1],
          options_.layer_dims[layer]};
}

Eigen::Map<const Eigen::VectorXd> QNetwork::bias(std::size_t layer) const {
  return {params_.data() + layout_.bias_offset.at(layer), options_.layer_dims[layer + 1]};
}

Eigen::Map<const Eigen::VectorXd> QNetwork::bn_gamma() const {
  return {params_.data() + layout_.gamma_offset, input_width()};
}

Eigen::Map<const Eigen::VectorXd> QNetwork::bn_beta() const {
  return {params_.data() + layout_.beta_offset, input_width()};
}

void QNetwork::copy_state_from(const QNetwork& other) {
  if (other.options_.layer_dims != options_.layer_dims) {
    throw DimensionError("cannot copy between networks of different shape");
  }
  params_ = other.params_;
  running_mean_ = other.running_mean_;
  running_var_ = other.running_var_;
  revision_ = other.revision_;
}

}  // namespace ehdrl::nn
