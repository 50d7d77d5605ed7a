#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tnmpcqep/qsim/kernels.hpp"

namespace tnmpcqep::qsim {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

/// Tensor product of one or two non-identity Pauli factors on distinct
/// qubits; identity elsewhere.
class PauliTerm {
 public:
  PauliTerm(int qubit, Pauli p);
  PauliTerm(int q1, Pauli p1, int q2, Pauli p2);

  const std::vector<std::pair<int, Pauli>>& factors() const { return factors_; }
  int weight() const { return static_cast<int>(factors_.size()); }
  int max_qubit() const;
  /// E.g. "Z0", "Z0Z3" (0-based qubit indices).
  std::string label() const;
  /// Bitmask form for an n-qubit register (qubit 0 is the most significant bit).
  PauliMask mask(int n_qubits) const;

 private:
  std::vector<std::pair<int, Pauli>> factors_;
};

/// Amplitude bit position of a qubit: qubit 0 is the most significant bit.
inline unsigned bit_of(int qubit, int n_qubits) { return static_cast<unsigned>(n_qubits - 1 - qubit); }

}  // namespace tnmpcqep::qsim
