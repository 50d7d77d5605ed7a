#include "tnmpcqep/qep/observables.hpp"

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::qep {

using qsim::Pauli;
using qsim::PauliTerm;

std::string to_string(ObservableMode mode) {
  return mode == ObservableMode::NearestNeighbor ? "nearest-neighbor" : "all-pairs";
}

ObservableMode parse_observable_mode(const std::string& text) {
  if (text == "nn" || text == "nearest-neighbor") return ObservableMode::NearestNeighbor;
  if (text == "all" || text == "all-pairs") return ObservableMode::AllPairs;
  throw UsageError("unknown observable mode '" + text + "' (expected nearest-neighbor or all-pairs)");
}

std::vector<PauliTerm> observable_set(int n_qubits, ObservableMode mode) {
  if (n_qubits < 2) throw UsageError("observable set needs at least 2 qubits");
  std::vector<PauliTerm> terms;
  for (int q = 0; q < n_qubits; ++q) terms.emplace_back(q, Pauli::X);
  for (int q = 0; q < n_qubits; ++q) terms.emplace_back(q, Pauli::Z);
  for (int a = 0; a < n_qubits; ++a) {
    if (mode == ObservableMode::NearestNeighbor) {
      if (a + 1 < n_qubits) terms.emplace_back(a, Pauli::Z, a + 1, Pauli::Z);
    } else {
      for (int b = a + 1; b < n_qubits; ++b) terms.emplace_back(a, Pauli::Z, b, Pauli::Z);
    }
  }
  return terms;
}

int observable_count(int n_qubits, ObservableMode mode) {
  const int pairs = mode == ObservableMode::NearestNeighbor ? n_qubits - 1 : n_qubits * (n_qubits - 1) / 2;
  return 2 * n_qubits + pairs;
}

int suggest_qubits(int d) {
  if (d < 1) throw UsageError("suggest_qubits: d must be positive");
  int n = 0;
  while (n * n < d) ++n;
  return n;
}

}  // namespace tnmpcqep::qep
