#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehdrl/rng.hpp"

namespace ehdrl::nn {

enum class Mode { kTrain, kInfer };

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a backward pass is given a cache that was not produced by a
// Train-mode forward on the current parameters.
class CacheMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct NetworkOptions {
  std::vector<int> layer_dims{3, 4, 8, 8, 4, 2};
  double dropout_rate = 0.10;
  double bn_momentum = 0.9;
  double bn_epsilon = 1e-5;
};

// Offsets of each parameter group inside the flat trainable vector.
// Order: bn_gamma, bn_beta, then for every linear layer its weight matrix
// (out x in, column-major) followed by its bias.
struct ParameterLayout {
  Eigen::Index gamma_offset = 0;
  Eigen::Index beta_offset = 0;
  std::vector<Eigen::Index> weight_offset;
  std::vector<Eigen::Index> bias_offset;
  Eigen::Index size = 0;

  static ParameterLayout for_dims(const std::vector<int>& dims);
};

struct ForwardCache {
  std::uint64_t revision = 0;
  Eigen::MatrixXd xhat;
  Eigen::RowVectorXd inv_std;
  // layer_inputs[l] is the (post-dropout) activation fed to linear layer l.
  std::vector<Eigen::MatrixXd> layer_inputs;
  std::vector<Eigen::MatrixXd> pre_activations;
  // masks[l] scales hidden layer l's ReLU output; empty when no dropout there.
  std::vector<Eigen::MatrixXd> masks;
};

struct ForwardResult {
  Eigen::MatrixXd q_values;
  ForwardCache cache;
};

struct Gradients {
  Eigen::VectorXd values;
};

// Fully connected Q-network: batch normalisation on the input features,
// ReLU hidden layers with inverted dropout between them, linear output.
// Rows of a batch are samples; columns are state features.
class QNetwork {
 public:
  explicit QNetwork(NetworkOptions options = {});

  // He-style uniform weights scaled by fan-in; biases zero; gamma one,
  // beta zero; running statistics (0, 1). Pure function of the seed.
  static QNetwork init(std::uint64_t seed, NetworkOptions options = {});

  // Train mode uses batch statistics, updates the running statistics and
  // draws dropout masks from `rng`. Infer mode is deterministic.
  ForwardResult forward(const Eigen::MatrixXd& batch, Mode mode, Rng& rng);
  Eigen::MatrixXd infer(const Eigen::MatrixXd& batch) const;

  Gradients backward(const ForwardCache& cache, const Eigen::MatrixXd& dloss_dq) const;

  const NetworkOptions& options() const { return options_; }
  const std::vector<int>& layer_dims() const { return options_.layer_dims; }
  const ParameterLayout& layout() const { return layout_; }
  int input_width() const { return options_.layer_dims.front(); }
  int output_width() const { return options_.layer_dims.back(); }
  std::size_t linear_layers() const { return options_.layer_dims.size() - 1; }

  const Eigen::VectorXd& parameters() const { return params_; }
  void set_parameters(const Eigen::VectorXd& params);

  const Eigen::VectorXd& running_mean() const { return running_mean_; }
  const Eigen::VectorXd& running_var() const { return running_var_; }
  void set_running_stats(const Eigen::VectorXd& mean, const Eigen::VectorXd& var);

  Eigen::Map<const Eigen::MatrixXd> weight(std::size_t layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;
  Eigen::Map<const Eigen::VectorXd> bn_gamma() const;
  Eigen::Map<const Eigen::VectorXd> bn_beta() const;

  // Copies every parameter and running statistic (target-network sync).
  void copy_state_from(const QNetwork& other);

  // Bumped on every mutation of parameters or running statistics.
  std::uint64_t revision() const { return revision_; }

 private:
  Eigen::MatrixXd normalise_infer(const Eigen::MatrixXd& batch) const;
  void check_width(const Eigen::MatrixXd& batch) const;
  bool dropout_after(std::size_t hidden) const;

  NetworkOptions options_;
  ParameterLayout layout_;
  Eigen::VectorXd params_;
  Eigen::VectorXd running_mean_;
  Eigen::VectorXd running_var_;
  std::uint64_t revision_ = 0;
};

}  // namespace ehdrl::nn
