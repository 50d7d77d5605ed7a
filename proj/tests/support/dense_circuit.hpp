#pragma once

// Dense Kronecker-product reference for the layered Ry/Rz + CNOT-chain circuit.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tnmpcqep/qsim/statevector.hpp"

namespace dense {

using tnmpcqep::qsim::Complex;
using tnmpcqep::qsim::StateVector;
using CM = Eigen::MatrixXcd;
using CV = Eigen::VectorXcd;

inline const Complex I1(0, 1);

inline CM ry_dense(double t) {
  CM m(2, 2);
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}
inline CM rz_dense(double t) {
  CM m = CM::Zero(2, 2);
  m(0, 0) = std::exp(-I1 * (t / 2));
  m(1, 1) = std::exp(I1 * (t / 2));
  return m;
}
inline CM pauli_dense(char p) {
  CM m(2, 2);
  if (p == 'X') m << 0, 1, 1, 0;
  if (p == 'Y') m << 0, -I1, I1, 0;
  if (p == 'Z') m << 1, 0, 0, -1;
  if (p == 'I') m = CM::Identity(2, 2);
  return m;
}

inline CM kron(const CM& a, const CM& b) {
  CM out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator on an n-qubit register; factor 0 is the leftmost Kronecker factor.
inline CM embed(const std::vector<CM>& factors) {
  CM out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

inline CM single(int n, int q, const CM& g) {
  std::vector<CM> f(n, CM::Identity(2, 2));
  f[q] = g;
  return embed(f);
}

inline CM cnot_dense(int n, int c) {
  CM p0 = CM::Zero(2, 2), p1 = CM::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  std::vector<CM> a(n, CM::Identity(2, 2)), b(n, CM::Identity(2, 2));
  a[c] = p0;
  b[c] = p1;
  b[c + 1] = pauli_dense('X');
  return embed(a) + embed(b);
}

inline CV dense_circuit(const std::vector<double>& angles, int layers, int n) {
  CV psi = CV::Zero(1 << n);
  psi(0) = 1;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) {
      psi = single(n, q, ry_dense(angles[(l * n + q) * 2])) * psi;
      psi = single(n, q, rz_dense(angles[(l * n + q) * 2 + 1])) * psi;
    }
    for (int q = 0; q + 1 < n; ++q) psi = cnot_dense(n, q) * psi;
  }
  return psi;
}

inline std::vector<double> random_angles(std::mt19937_64& rng, int layers, int n) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  std::vector<double> a(static_cast<std::size_t>(layers * n * 2));
  for (auto& v : a) v = u(rng);
  return a;
}

inline double max_diff(const StateVector& s, const CV& psi) {
  double m = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) m = std::max(m, std::abs(s.amplitudes()[i] - psi(static_cast<Eigen::Index>(i))));
  return m;
}

}  // namespace dense
