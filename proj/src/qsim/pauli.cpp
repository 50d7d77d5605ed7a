#include "tnmpcqep/qsim/pauli.hpp"

#include <algorithm>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::qsim {

PauliTerm::PauliTerm(int qubit, Pauli p) {
  if (qubit < 0) throw UsageError("pauli term: negative qubit index");
  factors_.emplace_back(qubit, p);
}

PauliTerm::PauliTerm(int q1, Pauli p1, int q2, Pauli p2) {
  if (q1 < 0 || q2 < 0) throw UsageError("pauli term: negative qubit index");
  if (q1 == q2) throw UsageError("pauli term: factors must act on distinct qubits");
  factors_.emplace_back(q1, p1);
  factors_.emplace_back(q2, p2);
  std::sort(factors_.begin(), factors_.end());
}

int PauliTerm::max_qubit() const {
  int m = 0;
  for (const auto& [q, p] : factors_) m = std::max(m, q);
  return m;
}

std::string PauliTerm::label() const {
  std::string out;
  for (const auto& [q, p] : factors_) out += static_cast<char>(p) + std::to_string(q);
  return out;
}

PauliMask PauliTerm::mask(int n_qubits) const {
  if (max_qubit() >= n_qubits) {
    throw UsageError("pauli term " + label() + " acts outside a " + std::to_string(n_qubits) + "-qubit register");
  }
  PauliMask m;
  for (const auto& [q, p] : factors_) {
    const std::uint64_t b = std::uint64_t{1} << bit_of(q, n_qubits);
    if (p == Pauli::X || p == Pauli::Y) m.x_mask |= b;
    if (p == Pauli::Z || p == Pauli::Y) m.z_mask |= b;
    if (p == Pauli::Y) ++m.y_count;
  }
  return m;
}

}  // namespace tnmpcqep::qsim
