// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcap/model.hpp"
#include "qcap/statevec.hpp"

namespace qcap {

enum class FeatureMapKind {
  kHardZZ,        // H layer, then depth x [RZ(x_i), RZZ on every pair i<j]
  kEasyAngle,     // RY(x_i) on each qubit, no entanglement
  kHardZZLinear,  // as kHardZZ with RZZ only on neighbours (i, i+1)
};

enum class Entanglement { kAllToAll, kLinear };

// How the quantum model differentiates p(y|x; theta). Both are exact for RY
// generators; the adjoint sweep costs O(gates) instead of O(d * gates).
enum class GradientMethod { kAdjoint, kParameterShift };

struct QnnSpec {
  int n_qubits = 4;
  FeatureMapKind feature_map = FeatureMapKind::kHardZZ;
  int feature_depth = 2;
  int var_depth = 1;
  Entanglement entanglement = Entanglement::kAllToAll;

  // d = (D + 1) * S
  std::size_t param_count() const {
    return static_cast<std::size_t>(var_depth + 1) * static_cast<std::size_t>(n_qubits);
  }
  void validate() const;
  std::string describe() const;

  // The three circuit families: hard ZZ map + all-to-all variational form,
  // angle encoding + all-to-all, and the neighbour-only hardware layout.
  static QnnSpec qnn(int n_qubits, int var_depth);
  static QnnSpec easy(int n_qubits, int var_depth);
  static QnnSpec qnn_linear(int n_qubits, int var_depth);

  friend bool operator==(const QnnSpec&, const QnnSpec&) = default;
};

// Data-encoding gates for input x (already in [-1, 1]).
std::vector<Gate> build_feature_circuit(const QnnSpec& spec, std::span<const double> x);

// RY layer, then var_depth x [CNOT layer, RY layer]. Every RY carries the
// index of the parameter it reads.
std::vector<Gate> build_var_circuit(const QnnSpec& spec, std::span<const double> theta);

class QuantumNeuralNetwork final : public StatisticalModel {
 public:
  explicit QuantumNeuralNetwork(QnnSpec spec,
                                GradientMethod method = GradientMethod::kAdjoint);

  const QnnSpec& spec() const { return spec_; }
  GradientMethod gradient_method() const { return method_; }

  std::size_t param_count() const override { return spec_.param_count(); }
  std::size_t input_dim() const override { return static_cast<std::size_t>(spec_.n_qubits); }
  std::size_t num_classes() const override { return 2; }
  std::string describe() const override { return spec_.describe(); }

  // (p_even, p_odd) = (p(0|x), p(1|x)).
  ParityProbabilities parity(std::span<const double> theta, std::span<const double> x) const;
  std::vector<double> probabilities(std::span<const double> theta,
                                    std::span<const double> x) const override;
  GradLogProb grad_log_prob(std::span<const double> theta, std::span<const double> x,
                            int y) const override;
  std::vector<double> prior_input(std::span<const double> gaussian) const override;

  // d p(0|x) / d theta by each route.
  std::vector<double> grad_prob0_shift(std::span<const double> theta,
                                       std::span<const double> x) const;
  std::vector<double> grad_prob0_adjoint(std::span<const double> theta,
                                         std::span<const double> x) const;

  // Feature-map state for x.
  Statevector encode(std::span<const double> x) const;
  // Runs the variational form on `state` in place.
  void run_variational(Statevector& state, std::span<const double> theta) const;

 private:
  struct Op {
    int qubit = -1;         // RY target, -1 for a permutation op
    int param = -1;         // RY parameter index
    std::size_t perm = 0;   // index into perms_/inverse_perms_
  };

  GradLogProb finish(double p0, std::vector<double> dp0, int y) const;

  QnnSpec spec_;
  GradientMethod method_;
  std::vector<Op> ops_;
  std::vector<std::vector<std::uint32_t>> perms_;
  std::vector<std::vector<std::uint32_t>> inverse_perms_;
};

// A quantum model at a fixed parameter vector.
struct QuantumModel {
  QnnSpec spec;
  std::vector<double> theta;

  void validate() const;
};

ParityProbabilities conditional_prob(const QuantumModel& model, std::span<const double> x);
GradLogProb grad_log_prob(const QuantumModel& model, std::span<const double> x, int y,
                          GradientMethod method = GradientMethod::kParameterShift);

}  // namespace qcap
