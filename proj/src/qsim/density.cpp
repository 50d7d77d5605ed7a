#include "tnmpcqep/qsim/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::qsim {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Noiseless: return "noiseless";
    case NoiseKind::Depolarizing: return "depolarizing";
    case NoiseKind::Thermal: return "thermal";
    case NoiseKind::Mixed: return "mixed";
  }
  return "?";
}

NoiseKind parse_noise_kind(const std::string& text) {
  if (text == "noiseless" || text == "none") return NoiseKind::Noiseless;
  if (text == "depolarizing") return NoiseKind::Depolarizing;
  if (text == "thermal") return NoiseKind::Thermal;
  if (text == "mixed") return NoiseKind::Mixed;
  throw UsageError("unknown noise kind '" + text + "' (expected noiseless, depolarizing, thermal or mixed)");
}

void NoiseSpec::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError(std::string("noise: ") + name + " must lie in [0, 1]");
  };
  check(p, "p");
  check(gamma_amp, "gamma_amp");
  check(gamma_phase, "gamma_phase");
}

std::string NoiseSpec::label() const {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case NoiseKind::Noiseless: break;
    case NoiseKind::Depolarizing: out << "(p=" << p << ")"; break;
    case NoiseKind::Thermal: out << "(gamma_amp=" << gamma_amp << ",gamma_phase=" << gamma_phase << ")"; break;
    case NoiseKind::Mixed:
      out << "(p=" << p << ",gamma_amp=" << gamma_amp << ",gamma_phase=" << gamma_phase << ")";
      break;
  }
  return out.str();
}

Super4 kraus_superoperator(std::span<const Mat2> kraus) {
  Super4 s{};
  for (const auto& k : kraus) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) s[(a * 2 + b) * 4 + (c * 2 + d)] += k[a * 2 + c] * std::conj(k[b * 2 + d]);
        }
      }
    }
  }
  return s;
}

Super4 unitary_superoperator(const Mat2& u) { return kraus_superoperator(std::span<const Mat2>(&u, 1)); }

Super4 compose(const Super4& second, const Super4& first) {
  Super4 s{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int m = 0; m < 4; ++m) s[i * 4 + j] += second[i * 4 + m] * first[m * 4 + j];
    }
  }
  return s;
}

Super4 depolarizing_superoperator(double p) {
  // (1 - p) rho + p I/2 Tr(rho) = (1 - 3p/4) rho + p/4 (X rho X + Y rho Y + Z rho Z)
  const double a = std::sqrt(1.0 - 0.75 * p), b = std::sqrt(0.25 * p);
  const Mat2 k[4] = {Mat2{a, 0, 0, a}, Mat2{0, b, b, 0}, Mat2{0, Complex(0, -b), Complex(0, b), 0}, Mat2{b, 0, 0, -b}};
  return kraus_superoperator(k);
}

Super4 amplitude_damping_superoperator(double gamma) {
  const Mat2 k[2] = {Mat2{1, 0, 0, std::sqrt(1.0 - gamma)}, Mat2{0, std::sqrt(gamma), 0, 0}};
  return kraus_superoperator(k);
}

Super4 phase_damping_superoperator(double lambda) {
  const Mat2 k[2] = {Mat2{1, 0, 0, std::sqrt(1.0 - lambda)}, Mat2{0, 0, 0, std::sqrt(lambda)}};
  return kraus_superoperator(k);
}

Super4 NoiseSpec::superoperator() const {
  validate();
  const Super4 thermal = compose(phase_damping_superoperator(gamma_phase), amplitude_damping_superoperator(gamma_amp));
  switch (kind) {
    case NoiseKind::Noiseless: return unitary_superoperator(Mat2{1, 0, 0, 1});
    case NoiseKind::Depolarizing: return depolarizing_superoperator(p);
    case NoiseKind::Thermal: return thermal;
    case NoiseKind::Mixed: return compose(thermal, depolarizing_superoperator(p));
  }
  throw UsageError("noise: unknown kind");
}

DensityMatrix::DensityMatrix(int n_qubits, Backend backend) : n_(n_qubits), backend_(backend) {
  if (n_qubits < 1 || n_qubits > kMaxDensityQubits) {
    throw UsageError("density matrix mode supports 1 to " + std::to_string(kMaxDensityQubits) + " qubits, got " +
                     std::to_string(n_qubits));
  }
  dim_ = std::size_t{1} << n_qubits;
  rho_.assign(dim_ * dim_, Complex(0, 0));
  rho_[0] = 1.0;
}

void DensityMatrix::apply_superoperator(int qubit, const Super4& s) {
  if (qubit < 0 || qubit >= n_) throw UsageError("density: qubit out of range");
  const unsigned b = bit_of(qubit, n_);
  backend_ == Backend::OpenMP ? omp::density_apply_super(rho_.data(), dim_, b, s)
                              : serial::density_apply_super(rho_.data(), dim_, b, s);
}

void DensityMatrix::apply(const Gate& gate) {
  const int last = gate.kind == GateKind::CNOT ? gate.qubit + 1 : gate.qubit;
  if (gate.qubit < 0 || last >= n_) throw UsageError("gate: qubit out of range");
  if (gate.kind == GateKind::CNOT) {
    const unsigned cb = bit_of(gate.qubit, n_), tb = bit_of(gate.qubit + 1, n_);
    backend_ == Backend::OpenMP ? omp::density_apply_cnot(rho_.data(), dim_, cb, tb)
                                : serial::density_apply_cnot(rho_.data(), dim_, cb, tb);
  } else {
    apply_superoperator(gate.qubit, unitary_superoperator(gate.matrix()));
  }
}

Complex DensityMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) t += rho_[j * dim_ + j];
  return t;
}

double DensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
  }
  return worst;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd m(dim_, dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = at(r, c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::expectation(const PauliTerm& term, double* imag_residue) const {
  const PauliMask m = term.mask(n_);
  const Complex v = backend_ == Backend::OpenMP ? omp::density_expectation(rho_.data(), dim_, m)
                                                : serial::density_expectation(rho_.data(), dim_, m);
  if (imag_residue) *imag_residue = v.imag();
  return std::clamp(v.real(), -1.0, 1.0);
}

DensityMatrix run_noisy(std::span<const double> angles, int layers, int n_qubits, const NoiseSpec& noise,
                        Backend backend) {
  const Super4 channel = noise.superoperator();
  const bool noisy = noise.kind != NoiseKind::Noiseless;
  const auto gates = circuit_gates(angles, layers, n_qubits);
  DensityMatrix rho(n_qubits, backend);
  // Single-qubit maps on one qubit compose, and maps on different qubits
  // commute, so each qubit accumulates a pending superoperator that is
  // applied only when a CNOT touches it (or at the end).
  std::vector<Super4> pending(n_qubits);
  std::vector<bool> has_pending(n_qubits, false);
  auto push = [&](int q, const Super4& s) {
    pending[q] = has_pending[q] ? compose(s, pending[q]) : s;
    has_pending[q] = true;
  };
  auto flush = [&](int q) {
    if (has_pending[q]) rho.apply_superoperator(q, pending[q]);
    has_pending[q] = false;
  };
  for (const auto& g : gates) {
    if (g.kind == GateKind::CNOT) {
      flush(g.qubit);
      flush(g.qubit + 1);
      rho.apply(g);
      if (noisy) {
        push(g.qubit, channel);
        push(g.qubit + 1, channel);
      }
    } else {
      if (g.qubit < 0 || g.qubit >= n_qubits) throw UsageError("gate: qubit out of range");
      push(g.qubit, unitary_superoperator(g.matrix()));
      if (noisy) push(g.qubit, channel);
    }
  }
  for (int q = 0; q < n_qubits; ++q) flush(q);
  return rho;
}

}  // namespace tnmpcqep::qsim
