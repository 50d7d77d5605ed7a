#pragma once

#include <string>
#include <vector>

#include "tnmpcqep/qsim/pauli.hpp"

namespace tnmpcqep::qep {

enum class ObservableMode { NearestNeighbor, AllPairs };

std::string to_string(ObservableMode mode);
/// Accepts "nn" / "nearest-neighbor" and "all" / "all-pairs".
ObservableMode parse_observable_mode(const std::string& text);

/// X_q for every qubit, then Z_q, then Z_a Z_b pairs in lexicographic order
/// (neighbours only, or all pairs). Requires n_qubits >= 2.
std::vector<qsim::PauliTerm> observable_set(int n_qubits, ObservableMode mode);
int observable_count(int n_qubits, ObservableMode mode);

/// ceil(sqrt(d)).
int suggest_qubits(int d);

}  // namespace tnmpcqep::qep
