#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "tnmpcqep/common/backend.hpp"
#include "tnmpcqep/qsim/kernels.hpp"
#include "tnmpcqep/qsim/pauli.hpp"

namespace tnmpcqep::qsim {

inline constexpr int kMaxStateQubits = 24;

enum class GateKind { Ry, Rz, CNOT };

/// Ry(t) = exp(-i t Y / 2) = [[c, -s], [s, c]] with c = cos(t/2), s = sin(t/2);
/// Rz(t) = exp(-i t Z / 2) = diag(e^{-it/2}, e^{it/2}); CNOT(q, q + 1) with
/// control q. Qubits are 0-based and qubit 0 is the most significant bit of
/// the amplitude index.
struct Gate {
  GateKind kind = GateKind::Ry;
  int qubit = 0;  // target for rotations, control for CNOT
  double theta = 0.0;

  static Gate ry(int q, double theta) { return {GateKind::Ry, q, theta}; }
  static Gate rz(int q, double theta) { return {GateKind::Rz, q, theta}; }
  static Gate cnot(int control) { return {GateKind::CNOT, control, 0.0}; }

  /// 2x2 matrix of a rotation gate.
  Mat2 matrix() const;
  /// Qubits the gate acts on.
  std::vector<int> support() const;
};

class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits, Backend backend = Backend::OpenMP);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  Backend backend() const { return backend_; }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  std::vector<Complex>& amplitudes() { return amp_; }

  /// Throws UsageError on an out-of-range qubit.
  void apply(const Gate& gate);
  double norm() const;
  /// <psi|P|psi>, clamped to [-1, 1]. `imag_residue` receives the imaginary
  /// part of the raw sum when non-null.
  double expectation(const PauliTerm& term, double* imag_residue = nullptr) const;

 private:
  int n_;
  Backend backend_;
  std::vector<Complex> amp_;
};

/// Angles are laid out as [layer][qubit][y, z], i.e. index (l * n + q) * 2 + {0, 1}.
std::vector<Gate> circuit_gates(std::span<const double> angles, int layers, int n_qubits);
StateVector run_circuit(std::span<const double> angles, int layers, int n_qubits, Backend backend = Backend::OpenMP);

/// CSV with header "index,re,im", one row per amplitude.
void write_amplitudes_csv(std::ostream& out, const StateVector& state);

}  // namespace tnmpcqep::qsim
