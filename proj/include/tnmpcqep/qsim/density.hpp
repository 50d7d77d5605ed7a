#pragma once

#include <span>
#include <string>
#include <vector>

#include "tnmpcqep/common/backend.hpp"
#include "tnmpcqep/qsim/statevector.hpp"

namespace tnmpcqep::qsim {

inline constexpr int kMaxDensityQubits = 10;

enum class NoiseKind { Noiseless, Depolarizing, Thermal, Mixed };

/// Single-qubit noise applied after every gate on each qubit of its support.
/// Thermal is amplitude damping followed by phase damping; mixed is
/// depolarizing followed by thermal.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::Noiseless;
  double p = 0.01;            // depolarizing probability
  double gamma_amp = 0.01;    // amplitude damping
  double gamma_phase = 0.01;  // phase damping

  /// Throws UsageError unless every parameter lies in [0, 1].
  void validate() const;
  /// "noiseless", "depolarizing(p=0.01)", ...
  std::string label() const;
  /// Combined per-qubit superoperator; identity for the noiseless kind.
  Super4 superoperator() const;
};

std::string to_string(NoiseKind kind);
/// Accepts noiseless, depolarizing, thermal, mixed. Throws UsageError otherwise.
NoiseKind parse_noise_kind(const std::string& text);

/// Superoperators on the vectorized 2x2 block, S = sum_K K (x) conj(K).
Super4 kraus_superoperator(std::span<const Mat2> kraus);
Super4 unitary_superoperator(const Mat2& u);
Super4 compose(const Super4& second, const Super4& first);
Super4 depolarizing_superoperator(double p);
Super4 amplitude_damping_superoperator(double gamma);
Super4 phase_damping_superoperator(double lambda);

class DensityMatrix {
 public:
  /// |0...0><0...0|; throws UsageError above kMaxDensityQubits.
  explicit DensityMatrix(int n_qubits, Backend backend = Backend::OpenMP);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Complex>& data() const { return rho_; }
  Complex at(std::size_t r, std::size_t c) const { return rho_[r * dim_ + c]; }

  void apply(const Gate& gate);
  void apply_superoperator(int qubit, const Super4& s);

  Complex trace() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  /// Tr(rho P), real part clamped to [-1, 1].
  double expectation(const PauliTerm& term, double* imag_residue = nullptr) const;

 private:
  int n_;
  std::size_t dim_;
  Backend backend_;
  std::vector<Complex> rho_;
};

DensityMatrix run_noisy(std::span<const double> angles, int layers, int n_qubits, const NoiseSpec& noise,
                        Backend backend = Backend::OpenMP);

}  // namespace tnmpcqep::qsim
