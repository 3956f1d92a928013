// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qcap {

using Complex = std::complex<double>;

enum class GateKind { H, RY, RZ, CNOT };

// One gate of a circuit. Qubit 0 is the least-significant bit of the basis
// index. `param` is the index of the trainable parameter feeding an RY angle,
// or -1 for gates whose angle is fixed (data-encoding gates).
struct Gate {
  GateKind kind = GateKind::H;
  int target = 0;
  int control = -1;
  double angle = 0.0;
  int param = -1;

  static Gate h(int q) { return {GateKind::H, q, -1, 0.0, -1}; }
  static Gate ry(int q, double angle, int param = -1) { return {GateKind::RY, q, -1, angle, param}; }
  static Gate rz(int q, double angle) { return {GateKind::RZ, q, -1, angle, -1}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, 0.0, -1}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

// `KIND q[args] angle`: "H q[0]", "RY q[2] 0.5", "CNOT q[0,1]" (control
// first). Angles are printed with 17 significant digits.
std::string to_string(const Gate& g);
std::string dump_circuit(std::span<const Gate> gates);

struct ParityProbabilities {
  double even = 0.0;
  double odd = 0.0;
};

// Dense statevector over 1..16 qubits, initialised to |0...0>.
class Statevector {
 public:
  static constexpr int kMaxQubits = 16;

  explicit Statevector(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }

  // Throws ValidationError for qubit indices outside [0, S) or a CNOT whose
  // control equals its target.
  void apply(const Gate& g);
  void apply(std::span<const Gate> gates);
  void apply_inverse(const Gate& g);

  // Applies [[m00, m01], [m10, m11]] to qubit q; need not be unitary.
  void apply_matrix(int q, Complex m00, Complex m01, Complex m10, Complex m11);
  // Real 2x2 variant used by RY and its derivative.
  void apply_real_matrix(int q, double m00, double m01, double m10, double m11);
  // new_amps[perm[i]] = amps[i]; perm must be a permutation of [0, dim).
  void apply_permutation(std::span<const std::uint32_t> perm);

  double norm_squared() const;
  // <this|other>
  Complex inner(const Statevector& other) const;

  // Probability mass on even/odd popcount basis states. Throws
  // InvariantError when the state is not normalised within 1e-10.
  ParityProbabilities parity_probabilities() const;
  // sum_b (-1)^popcount(b) |amp_b|^2, i.e. <Z...Z>; no normalisation check.
  double parity_expectation() const;

 private:
  void check_qubit(int q) const;

  int n_qubits_;
  std::vector<Complex> amps_;
};

// Convenience wrapper matching the other factory-style APIs.
inline Statevector init_zero(int n_qubits) { return Statevector(n_qubits); }

// Basis permutation realised by a run of CNOT gates (applied in order).
std::vector<std::uint32_t> cnot_permutation(int n_qubits, std::span<const Gate> cnots);

}  // namespace qcap
