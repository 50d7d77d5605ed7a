#include "tnmpcqep/qsim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::qsim {

Mat2 Gate::matrix() const {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  switch (kind) {
    case GateKind::Ry: return {Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0)};
    case GateKind::Rz: return {Complex(c, -s), Complex(0, 0), Complex(0, 0), Complex(c, s)};
    case GateKind::CNOT: break;
  }
  throw UsageError("gate: CNOT has no 2x2 matrix");
}

std::vector<int> Gate::support() const {
  if (kind == GateKind::CNOT) return {qubit, qubit + 1};
  return {qubit};
}

StateVector::StateVector(int n_qubits, Backend backend) : n_(n_qubits), backend_(backend) {
  if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
    throw UsageError("statevector: qubit count must be in [1, " + std::to_string(kMaxStateQubits) + "]");
  }
  amp_.assign(std::size_t{1} << n_qubits, Complex(0, 0));
  amp_[0] = 1.0;
}

void StateVector::apply(const Gate& gate) {
  const int last = gate.kind == GateKind::CNOT ? gate.qubit + 1 : gate.qubit;
  if (gate.qubit < 0 || last >= n_) {
    throw UsageError("gate: qubit " + std::to_string(last) + " out of range for " + std::to_string(n_) + " qubits");
  }
  const bool par = backend_ == Backend::OpenMP;
  if (gate.kind == GateKind::CNOT) {
    const unsigned cb = bit_of(gate.qubit, n_), tb = bit_of(gate.qubit + 1, n_);
    par ? omp::apply_cnot(amp_.data(), dim(), cb, tb) : serial::apply_cnot(amp_.data(), dim(), cb, tb);
  } else {
    const Mat2 g = gate.matrix();
    const unsigned b = bit_of(gate.qubit, n_);
    par ? omp::apply_1q(amp_.data(), dim(), b, g) : serial::apply_1q(amp_.data(), dim(), b, g);
  }
}

double StateVector::norm() const {
  const double sq = backend_ == Backend::OpenMP ? omp::norm_squared(amp_.data(), dim())
                                                : serial::norm_squared(amp_.data(), dim());
  return std::sqrt(sq);
}

double StateVector::expectation(const PauliTerm& term, double* imag_residue) const {
  const PauliMask m = term.mask(n_);
  const double v = backend_ == Backend::OpenMP ? omp::expectation(amp_.data(), dim(), m, imag_residue)
                                               : serial::expectation(amp_.data(), dim(), m, imag_residue);
  return std::clamp(v, -1.0, 1.0);
}

std::vector<Gate> circuit_gates(std::span<const double> angles, int layers, int n_qubits) {
  if (layers < 1 || n_qubits < 1) throw UsageError("circuit: layers and qubits must be positive");
  const std::size_t expected = static_cast<std::size_t>(layers) * n_qubits * 2;
  if (angles.size() != expected) {
    throw UsageError("circuit: expected " + std::to_string(expected) + " angles (L x N_q x 2), got " +
                     std::to_string(angles.size()));
  }
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(layers) * (3 * n_qubits - 1));
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n_qubits; ++q) {
      const std::size_t base = (static_cast<std::size_t>(l) * n_qubits + q) * 2;
      gates.push_back(Gate::ry(q, angles[base]));
      gates.push_back(Gate::rz(q, angles[base + 1]));
    }
    for (int q = 0; q + 1 < n_qubits; ++q) gates.push_back(Gate::cnot(q));
  }
  return gates;
}

StateVector run_circuit(std::span<const double> angles, int layers, int n_qubits, Backend backend) {
  const auto gates = circuit_gates(angles, layers, n_qubits);
  StateVector state(n_qubits, backend);
  for (const auto& g : gates) state.apply(g);
  return state;
}

void write_amplitudes_csv(std::ostream& out, const StateVector& state) {
  out << "index,re,im\n" << std::setprecision(17);
  for (std::size_t j = 0; j < state.dim(); ++j) {
    out << j << ',' << state.amplitudes()[j].real() << ',' << state.amplitudes()[j].imag() << '\n';
  }
}

}  // namespace tnmpcqep::qsim
