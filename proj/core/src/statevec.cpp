// Copyright 2026 The qcap Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcap/statevec.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcap/error.hpp"

namespace qcap {

std::string to_string(const Gate& g) {
  std::ostringstream os;
  os.precision(17);
  switch (g.kind) {
    case GateKind::H:
      os << "H q[" << g.target << "]";
      break;
    case GateKind::RY:
      os << "RY q[" << g.target << "] " << g.angle;
      break;
    case GateKind::RZ:
      os << "RZ q[" << g.target << "] " << g.angle;
      break;
    case GateKind::CNOT:
      os << "CNOT q[" << g.control << "," << g.target << "]";
      break;
  }
  return os.str();
}

std::string dump_circuit(std::span<const Gate> gates) {
  std::string out;
  for (const auto& g : gates) {
    out += to_string(g);
    out += '\n';
  }
  return out;
}

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ValidationError("statevector: qubit count " + std::to_string(n_qubits) +
                          " outside [1, " + std::to_string(kMaxQubits) + "]");
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

void Statevector::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits_)
    throw ValidationError("gate qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(n_qubits_) + " qubits");
}

void Statevector::apply_matrix(int q, Complex m00, Complex m01, Complex m10, Complex m11) {
  check_qubit(q);
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t n = amps_.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = amps_[i];
      const Complex a1 = amps_[i + stride];
      amps_[i] = m00 * a0 + m01 * a1;
      amps_[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void Statevector::apply_real_matrix(int q, double m00, double m01, double m10, double m11) {
  check_qubit(q);
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t n = amps_.size();
  // Operate on the interleaved (re, im) doubles; a real matrix acts on both
  // parts independently.
  double* a = reinterpret_cast<double*>(amps_.data());
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      double* lo = a + 2 * i;
      double* hi = a + 2 * (i + stride);
      const double r0 = lo[0], i0 = lo[1], r1 = hi[0], i1 = hi[1];
      lo[0] = m00 * r0 + m01 * r1;
      lo[1] = m00 * i0 + m01 * i1;
      hi[0] = m10 * r0 + m11 * r1;
      hi[1] = m10 * i0 + m11 * i1;
    }
  }
}

void Statevector::apply_permutation(std::span<const std::uint32_t> perm) {
  if (perm.size() != amps_.size()) throw ValidationError("permutation size mismatch");
  std::vector<Complex> out(amps_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = amps_[i];
  amps_.swap(out);
}

void Statevector::apply(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: {
      const double s = std::numbers::sqrt2 / 2.0;
      apply_real_matrix(g.target, s, s, s, -s);
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
      apply_real_matrix(g.target, c, -s, s, c);
      break;
    }
    case GateKind::RZ: {
      const Complex e = std::polar(1.0, -g.angle / 2.0);
      apply_matrix(g.target, e, 0.0, 0.0, std::conj(e));
      break;
    }
    case GateKind::CNOT: {
      check_qubit(g.control);
      check_qubit(g.target);
      if (g.control == g.target) throw ValidationError("CNOT control equals target");
      const std::size_t cbit = std::size_t{1} << g.control;
      const std::size_t tbit = std::size_t{1} << g.target;
      for (std::size_t i = 0; i < amps_.size(); ++i)
        if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
      break;
    }
  }
}

void Statevector::apply(std::span<const Gate> gates) {
  for (const auto& g : gates) apply(g);
}

void Statevector::apply_inverse(const Gate& g) {
  switch (g.kind) {
    case GateKind::H:
    case GateKind::CNOT:
      apply(g);
      break;
    case GateKind::RY:
    case GateKind::RZ: {
      Gate inv = g;
      inv.angle = -g.angle;
      apply(inv);
      break;
    }
  }
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

Complex Statevector::inner(const Statevector& other) const {
  if (other.dim() != dim()) throw ValidationError("inner product: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

double Statevector::parity_expectation() const {
  double s = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    s += (std::popcount(i) & 1) ? -p : p;
  }
  return s;
}

ParityProbabilities Statevector::parity_probabilities() const {
  ParityProbabilities p;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const double w = std::norm(amps_[i]);
    if (std::popcount(i) & 1)
      p.odd += w;
    else
      p.even += w;
  }
  if (std::abs(p.even + p.odd - 1.0) > 1e-10)
    throw InvariantError("parity readout on a non-normalised state");
  return p;
}

std::vector<std::uint32_t> cnot_permutation(int n_qubits, std::span<const Gate> cnots) {
  const std::uint32_t dim = std::uint32_t{1} << n_qubits;
  std::vector<std::uint32_t> perm(dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    std::uint32_t b = i;
    for (const auto& g : cnots) {
      if (g.kind != GateKind::CNOT) throw ValidationError("cnot_permutation: non-CNOT gate");
      if (g.control < 0 || g.control >= n_qubits || g.target < 0 || g.target >= n_qubits ||
          g.control == g.target)
        throw ValidationError("cnot_permutation: bad qubit indices");
      if (b & (1u << g.control)) b ^= 1u << g.target;
    }
    perm[i] = b;
  }
  return perm;
}

}  // namespace qcap
