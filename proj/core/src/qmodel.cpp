// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/qmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "qcap/error.hpp"

namespace qcap {
namespace {

constexpr double kPi = std::numbers::pi;

void append_zz_block(std::vector<Gate>& gates, int n, std::span<const double> x, bool linear) {
  for (int i = 0; i < n; ++i) gates.push_back(Gate::rz(i, x[i]));
  for (int i = 0; i < n - 1; ++i) {
    const int j_end = linear ? i + 2 : n;
    for (int j = i + 1; j < j_end; ++j) {
      gates.push_back(Gate::cnot(i, j));
      gates.push_back(Gate::rz(j, (kPi - x[i]) * (kPi - x[j])));
      gates.push_back(Gate::cnot(i, j));
    }
  }
}

// Re <lambda | dRY(angle)/d angle | phi> summed over the qubit-q pairs.
double ry_derivative_overlap(const Statevector& lambda, const Statevector& phi, int q,
                             double angle) {
  const double c = 0.5 * std::cos(angle / 2.0);
  const double s = 0.5 * std::sin(angle / 2.0);
  const std::size_t stride = std::size_t{1} << q;
  const auto l = lambda.amplitudes();
  const auto p = phi.amplitudes();
  double acc = 0.0;
  for (std::size_t base = 0; base < p.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex mu0 = -s * p[i] - c * p[i + stride];
      const Complex mu1 = c * p[i] - s * p[i + stride];
      acc += (std::conj(l[i]) * mu0 + std::conj(l[i + stride]) * mu1).real();
    }
  }
  return acc;
}

}  // namespace

void QnnSpec::validate() const {
  if (n_qubits < 1 || n_qubits > Statevector::kMaxQubits)
    throw ValidationError("quantum model: qubit count " + std::to_string(n_qubits) +
                          " outside [1, " + std::to_string(Statevector::kMaxQubits) + "]");
  if (var_depth < 1) throw ValidationError("quantum model: variational depth must be >= 1");
  if (feature_map != FeatureMapKind::kEasyAngle && feature_depth < 1)
    throw ValidationError("quantum model: feature map depth must be >= 1");
}

std::string QnnSpec::describe() const {
  std::string fm;
  switch (feature_map) {
    case FeatureMapKind::kHardZZ: fm = "hard-zz(depth=" + std::to_string(feature_depth) + ")"; break;
    case FeatureMapKind::kEasyAngle: fm = "easy-angle"; break;
    case FeatureMapKind::kHardZZLinear:
      fm = "hard-zz-linear(depth=" + std::to_string(feature_depth) + ")";
      break;
  }
  return "qnn[S=" + std::to_string(n_qubits) + ",D=" + std::to_string(var_depth) + "," + fm +
         "," + (entanglement == Entanglement::kAllToAll ? "all-to-all" : "linear") + "]";
}

QnnSpec QnnSpec::qnn(int n_qubits, int var_depth) {
  return {n_qubits, FeatureMapKind::kHardZZ, 2, var_depth, Entanglement::kAllToAll};
}

QnnSpec QnnSpec::easy(int n_qubits, int var_depth) {
  return {n_qubits, FeatureMapKind::kEasyAngle, 1, var_depth, Entanglement::kAllToAll};
}

QnnSpec QnnSpec::qnn_linear(int n_qubits, int var_depth) {
  return {n_qubits, FeatureMapKind::kHardZZLinear, 2, var_depth, Entanglement::kLinear};
}

std::vector<Gate> build_feature_circuit(const QnnSpec& spec, std::span<const double> x) {
  spec.validate();
  const int n = spec.n_qubits;
  if (x.size() != static_cast<std::size_t>(n))
    throw ValidationError("feature map: input has " + std::to_string(x.size()) +
                          " features, circuit has " + std::to_string(n) + " qubits");
  std::vector<Gate> gates;
  switch (spec.feature_map) {
    case FeatureMapKind::kEasyAngle:
      for (int i = 0; i < n; ++i) gates.push_back(Gate::ry(i, x[i]));
      break;
    case FeatureMapKind::kHardZZ:
    case FeatureMapKind::kHardZZLinear: {
      const bool linear = spec.feature_map == FeatureMapKind::kHardZZLinear;
      for (int i = 0; i < n; ++i) gates.push_back(Gate::h(i));
      for (int rep = 0; rep < spec.feature_depth; ++rep) append_zz_block(gates, n, x, linear);
      break;
    }
  }
  return gates;
}

std::vector<Gate> build_var_circuit(const QnnSpec& spec, std::span<const double> theta) {
  spec.validate();
  const int n = spec.n_qubits;
  if (theta.size() != spec.param_count())
    throw ValidationError("variational form: expected " + std::to_string(spec.param_count()) +
                          " parameters, got " + std::to_string(theta.size()));
  std::vector<Gate> gates;
  int p = 0;
  for (int q = 0; q < n; ++q, ++p) gates.push_back(Gate::ry(q, theta[p], p));
  for (int layer = 0; layer < spec.var_depth; ++layer) {
    if (spec.entanglement == Entanglement::kAllToAll) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) gates.push_back(Gate::cnot(i, j));
    } else {
      for (int i = 0; i + 1 < n; ++i) gates.push_back(Gate::cnot(i, i + 1));
    }
    for (int q = 0; q < n; ++q, ++p) gates.push_back(Gate::ry(q, theta[p], p));
  }
  return gates;
}

QuantumNeuralNetwork::QuantumNeuralNetwork(QnnSpec spec, GradientMethod method)
    : spec_(spec), method_(method) {
  spec_.validate();
  const std::vector<double> zeros(spec_.param_count(), 0.0);
  const auto gates = build_var_circuit(spec_, zeros);
  // Fuse each run of CNOTs into a single basis permutation.
  std::vector<Gate> run;
  auto flush = [&] {
    if (run.empty()) return;
    auto perm = cnot_permutation(spec_.n_qubits, run);
    std::vector<std::uint32_t> inv(perm.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    ops_.push_back(Op{-1, -1, perms_.size()});
    perms_.push_back(std::move(perm));
    inverse_perms_.push_back(std::move(inv));
    run.clear();
  };
  for (const auto& g : gates) {
    if (g.kind == GateKind::CNOT) {
      run.push_back(g);
    } else {
      flush();
      ops_.push_back(Op{g.target, g.param, 0});
    }
  }
  flush();
}

Statevector QuantumNeuralNetwork::encode(std::span<const double> x) const {
  Statevector state(spec_.n_qubits);
  state.apply(build_feature_circuit(spec_, x));
  return state;
}

void QuantumNeuralNetwork::run_variational(Statevector& state,
                                           std::span<const double> theta) const {
  check_theta(theta);
  for (const auto& op : ops_) {
    if (op.qubit < 0) {
      state.apply_permutation(perms_[op.perm]);
    } else {
      const double a = theta[op.param];
      const double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
      state.apply_real_matrix(op.qubit, c, -s, s, c);
    }
  }
}

ParityProbabilities QuantumNeuralNetwork::parity(std::span<const double> theta,
                                                 std::span<const double> x) const {
  check_input(x);
  Statevector state = encode(x);
  run_variational(state, theta);
  return state.parity_probabilities();
}

std::vector<double> QuantumNeuralNetwork::probabilities(std::span<const double> theta,
                                                        std::span<const double> x) const {
  const auto p = parity(theta, x);
  return {p.even, p.odd};
}

std::vector<double> QuantumNeuralNetwork::grad_prob0_shift(std::span<const double> theta,
                                                           std::span<const double> x) const {
  check_theta(theta);
  check_input(x);
  const Statevector encoded = encode(x);
  std::vector<double> shifted(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  auto p0_at = [&] {
    Statevector s = encoded;
    run_variational(s, shifted);
    return s.parity_probabilities().even;
  };
  for (std::size_t j = 0; j < theta.size(); ++j) {
    shifted[j] = theta[j] + kPi / 2.0;
    const double plus = p0_at();
    shifted[j] = theta[j] - kPi / 2.0;
    const double minus = p0_at();
    shifted[j] = theta[j];
    grad[j] = (plus - minus) / 2.0;
  }
  return grad;
}

std::vector<double> QuantumNeuralNetwork::grad_prob0_adjoint(std::span<const double> theta,
                                                             std::span<const double> x) const {
  check_theta(theta);
  check_input(x);
  Statevector phi = encode(x);
  run_variational(phi, theta);
  // lambda = O |psi>, O = Z x ... x Z
  Statevector lambda = phi;
  {
    auto l = lambda.amplitudes();
    for (std::size_t i = 0; i < l.size(); ++i)
      if (std::popcount(i) & 1) l[i] = -l[i];
  }
  std::vector<double> grad(theta.size(), 0.0);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    if (it->qubit < 0) {
      phi.apply_permutation(inverse_perms_[it->perm]);
      lambda.apply_permutation(inverse_perms_[it->perm]);
      continue;
    }
    const double a = theta[it->param];
    const double c = std::cos(a / 2.0), s = std::sin(a / 2.0);
    phi.apply_real_matrix(it->qubit, c, s, -s, c);  // RY(-a)
    // d<O>/d theta = 2 Re <lambda| dRY |phi>; p0 = (1 + <O>) / 2.
    grad[it->param] = ry_derivative_overlap(lambda, phi, it->qubit, a);
    lambda.apply_real_matrix(it->qubit, c, s, -s, c);
  }
  return grad;
}

GradLogProb QuantumNeuralNetwork::finish(double p0, std::vector<double> dp0, int y) const {
  if (y != 0 && y != 1) throw ValidationError("quantum model: class must be 0 or 1");
  GradLogProb out;
  const double p = y == 0 ? p0 : 1.0 - p0;
  out.prob = p;
  double denom = p;
  if (p < kProbFloor) {
    out.clamped = true;
    denom = kProbFloor;
  }
  const double sign = y == 0 ? 1.0 : -1.0;
  for (double& g : dp0) g = sign * g / denom;
  out.grad = std::move(dp0);
  return out;
}

GradLogProb QuantumNeuralNetwork::grad_log_prob(std::span<const double> theta,
                                                std::span<const double> x, int y) const {
  const double p0 = parity(theta, x).even;
  auto dp0 = method_ == GradientMethod::kAdjoint ? grad_prob0_adjoint(theta, x)
                                                 : grad_prob0_shift(theta, x);
  return finish(p0, std::move(dp0), y);
}

std::vector<double> QuantumNeuralNetwork::prior_input(std::span<const double> gaussian) const {
  return gaussian_to_feature_domain(gaussian);
}

void QuantumModel::validate() const {
  spec.validate();
  if (theta.size() != spec.param_count())
    throw ValidationError("quantum model: expected " + std::to_string(spec.param_count()) +
                          " parameters, got " + std::to_string(theta.size()));
}

ParityProbabilities conditional_prob(const QuantumModel& model, std::span<const double> x) {
  model.validate();
  return QuantumNeuralNetwork(model.spec).parity(model.theta, x);
}

GradLogProb grad_log_prob(const QuantumModel& model, std::span<const double> x, int y,
                          GradientMethod method) {
  model.validate();
  return QuantumNeuralNetwork(model.spec, method).grad_log_prob(model.theta, x, y);
}

}  // namespace qcap
