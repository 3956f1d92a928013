// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcap/model.hpp"

namespace qcap {

enum class Activation { kRelu, kLeakyRelu, kTanh, kSigmoid };

inline constexpr double kLeakyReluSlope = 0.01;

std::string_view to_string(Activation a);
// Accepts relu, leaky_relu, tanh, sigmoid.
Activation parse_activation(std::string_view name);

// Fully connected feed-forward layout [s_in, h_1, ..., h_L, s_out]. The
// activation applies to hidden layers; the output layer feeds a softmax.
struct MlpTopology {
  std::vector<int> layer_sizes;
  bool use_bias = false;
  Activation activation = Activation::kLeakyRelu;

  std::size_t param_count() const;
  int s_in() const { return layer_sizes.front(); }
  int s_out() const { return layer_sizes.back(); }
  void validate() const;

  // "s_in-h1-...-s_out[:bias][:activation]", e.g. "4-4-4-2:bias:tanh".
  std::string to_string() const;
  // Inverse of to_string. The activation defaults to leaky_relu. Errors
  // name the 1-based column of the offending character.
  static MlpTopology parse(std::string_view text);

  friend bool operator==(const MlpTopology&, const MlpTopology&) = default;
};

// Every topology with 1..max_layers hidden layers of width 1..max_width, with
// and without biases, whose parameter count is exactly d. Sorted by layer
// sizes, then no-bias before bias.
std::vector<MlpTopology> enumerate_topologies(std::size_t d, int s_in, int s_out,
                                              int max_layers = 3, int max_width = 256,
                                              Activation activation = Activation::kLeakyRelu);

// Parameters are laid out layer by layer: the out x in weight matrix
// (row-major), then the bias vector when the topology has one.
class Mlp final : public StatisticalModel {
 public:
  explicit Mlp(MlpTopology topology);

  const MlpTopology& topology() const { return topology_; }

  std::size_t param_count() const override { return param_count_; }
  std::size_t input_dim() const override {
    return static_cast<std::size_t>(topology_.s_in());
  }
  std::size_t num_classes() const override {
    return static_cast<std::size_t>(topology_.s_out());
  }
  std::string describe() const override { return "mlp[" + topology_.to_string() + "]"; }

  std::vector<double> probabilities(std::span<const double> theta,
                                    std::span<const double> x) const override;
  GradLogProb grad_log_prob(std::span<const double> theta, std::span<const double> x,
                            int y) const override;
  LossGradient cross_entropy(std::span<const double> theta, const Dataset& ds) const override;

 private:
  struct Workspace {
    std::vector<std::vector<double>> pre;   // pre-activations per layer
    std::vector<std::vector<double>> post;  // activations per layer (post[0] = x)
    std::vector<double> delta;
    std::vector<double> delta_prev;
  };

  Workspace make_workspace() const;
  // Fills ws and returns softmax probabilities (stored in ws.post.back()).
  void forward(std::span<const double> theta, std::span<const double> x, Workspace& ws) const;
  // Adds scale * d log p_y / d theta into grad.
  void backward(std::span<const double> theta, int y, Workspace& ws, double scale,
                std::span<double> grad) const;

  MlpTopology topology_;
  std::size_t param_count_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights in theta
};

// A classical network at a fixed parameter vector.
struct MlpModel {
  MlpTopology topology;
  std::vector<double> theta;
};

std::vector<double> forward(const MlpModel& model, std::span<const double> x);
GradLogProb grad_log_prob(const MlpModel& model, std::span<const double> x, int y);

}  // namespace qcap
