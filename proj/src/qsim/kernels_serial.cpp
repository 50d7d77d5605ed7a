#include <algorithm>
#include <utility>

#include "tnmpcqep/qsim/kernels.hpp"

namespace tnmpcqep::qsim::serial {

void apply_1q(Complex* amp, std::size_t dim, unsigned bit, const Mat2& g) {
  const std::size_t stride = std::size_t{1} << bit;
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const std::size_t i0 = insert_zero(i, bit);
    const std::size_t i1 = i0 | stride;
    const Complex a0 = amp[i0];
    const Complex a1 = amp[i1];
    amp[i0] = g[0] * a0 + g[1] * a1;
    amp[i1] = g[2] * a0 + g[3] * a1;
  }
}

void apply_cnot(Complex* amp, std::size_t dim, unsigned control_bit, unsigned target_bit) {
  const std::size_t c = std::size_t{1} << control_bit;
  const std::size_t t = std::size_t{1} << target_bit;
  const unsigned lo = std::min(control_bit, target_bit);
  const unsigned hi = std::max(control_bit, target_bit);
  for (std::size_t i = 0; i < dim / 4; ++i) {
    const std::size_t base = insert_zero(insert_zero(i, lo), hi) | c;
    std::swap(amp[base], amp[base | t]);
  }
}

double expectation(const Complex* amp, std::size_t dim, const PauliMask& p, double* imag_residue) {
  Complex total = 0.0;
  for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk) {
    const std::size_t begin = dim * chunk / kReductionChunks;
    const std::size_t end = dim * (chunk + 1) / kReductionChunks;
    Complex partial = 0.0;
    for (std::size_t j = begin; j < end; ++j) partial += std::conj(amp[j ^ p.x_mask]) * pauli_phase(j, p) * amp[j];
    total += partial;
  }
  if (imag_residue) *imag_residue = total.imag();
  return total.real();
}

double norm_squared(const Complex* amp, std::size_t dim) {
  double total = 0.0;
  for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk) {
    const std::size_t begin = dim * chunk / kReductionChunks;
    const std::size_t end = dim * (chunk + 1) / kReductionChunks;
    double partial = 0.0;
    for (std::size_t j = begin; j < end; ++j) partial += std::norm(amp[j]);
    total += partial;
  }
  return total;
}

void density_apply_super(Complex* rho, std::size_t dim, unsigned bit, const Super4& s) {
  const std::size_t stride = std::size_t{1} << bit;
  for (std::size_t ri = 0; ri < dim / 2; ++ri) {
    const std::size_t r0 = insert_zero(ri, bit);
    Complex* row0 = rho + r0 * dim;
    Complex* row1 = rho + (r0 | stride) * dim;
    for (std::size_t ci = 0; ci < dim / 2; ++ci) {
      const std::size_t c0 = insert_zero(ci, bit);
      const std::size_t c1 = c0 | stride;
      const Complex v[4] = {row0[c0], row0[c1], row1[c0], row1[c1]};
      Complex w[4];
      for (int a = 0; a < 4; ++a) w[a] = s[4 * a] * v[0] + s[4 * a + 1] * v[1] + s[4 * a + 2] * v[2] + s[4 * a + 3] * v[3];
      row0[c0] = w[0];
      row0[c1] = w[1];
      row1[c0] = w[2];
      row1[c1] = w[3];
    }
  }
}

void density_apply_cnot(Complex* rho, std::size_t dim, unsigned control_bit, unsigned target_bit) {
  const std::size_t c = std::size_t{1} << control_bit;
  const std::size_t t = std::size_t{1} << target_bit;
  for (std::size_t r = 0; r < dim; ++r) {
    if ((r & c) && !(r & t)) std::swap_ranges(rho + r * dim, rho + (r + 1) * dim, rho + (r | t) * dim);
  }
  for (std::size_t r = 0; r < dim; ++r) {
    Complex* row = rho + r * dim;
    for (std::size_t col = 0; col < dim; ++col) {
      if ((col & c) && !(col & t)) std::swap(row[col], row[col | t]);
    }
  }
}

Complex density_expectation(const Complex* rho, std::size_t dim, const PauliMask& p) {
  Complex total = 0.0;
  for (std::size_t chunk = 0; chunk < kReductionChunks; ++chunk) {
    const std::size_t begin = dim * chunk / kReductionChunks;
    const std::size_t end = dim * (chunk + 1) / kReductionChunks;
    Complex partial = 0.0;
    for (std::size_t j = begin; j < end; ++j) partial += rho[j * dim + (j ^ p.x_mask)] * pauli_phase(j, p);
    total += partial;
  }
  return total;
}

}  // namespace tnmpcqep::qsim::serial
