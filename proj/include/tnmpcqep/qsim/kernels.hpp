#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

namespace tnmpcqep::qsim {

using Complex = std::complex<double>;
/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;
/// Row-major 4x4 superoperator on the vectorized 2x2 block (r00, r01, r10, r11).
using Super4 = std::array<Complex, 16>;

/// A Pauli string in bitmask form: `x_mask` flips bits, each set bit of
/// `z_mask` contributes (-1)^b, and `y_count` factors of i are folded into
/// the phase (Y = i X Z). Masks use amplitude bit positions.
struct PauliMask {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;
};

// Kernels on raw arrays. `bit` is the amplitude bit position of the target
// qubit. The serial and OpenMP variants compute identical results; the
// reductions use the same fixed chunking so they agree bitwise.
namespace serial {
void apply_1q(Complex* amp, std::size_t dim, unsigned bit, const Mat2& g);
void apply_cnot(Complex* amp, std::size_t dim, unsigned control_bit, unsigned target_bit);
double expectation(const Complex* amp, std::size_t dim, const PauliMask& p, double* imag_residue);
double norm_squared(const Complex* amp, std::size_t dim);

void density_apply_super(Complex* rho, std::size_t dim, unsigned bit, const Super4& s);
void density_apply_cnot(Complex* rho, std::size_t dim, unsigned control_bit, unsigned target_bit);
Complex density_expectation(const Complex* rho, std::size_t dim, const PauliMask& p);
}  // namespace serial

namespace omp {
void apply_1q(Complex* amp, std::size_t dim, unsigned bit, const Mat2& g);
void apply_cnot(Complex* amp, std::size_t dim, unsigned control_bit, unsigned target_bit);
double expectation(const Complex* amp, std::size_t dim, const PauliMask& p, double* imag_residue);
double norm_squared(const Complex* amp, std::size_t dim);

void density_apply_super(Complex* rho, std::size_t dim, unsigned bit, const Super4& s);
void density_apply_cnot(Complex* rho, std::size_t dim, unsigned control_bit, unsigned target_bit);
Complex density_expectation(const Complex* rho, std::size_t dim, const PauliMask& p);
}  // namespace omp

/// Phase of P acting on basis state j: P|j> = phase(j) |j ^ x_mask>.
inline Complex pauli_phase(std::uint64_t j, const PauliMask& p) {
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  // Y = i X Z: Z factors act first on |j>, then X flips.
  const bool negative = (__builtin_popcountll(j & p.z_mask) & 1) != 0;
  const Complex phase = kIPow[p.y_count & 3];
  return negative ? -phase : phase;
}

/// Index j with a zero bit inserted at position `bit`.
inline std::size_t insert_zero(std::size_t i, unsigned bit) {
  const std::size_t low = i & ((std::size_t{1} << bit) - 1);
  return ((i >> bit) << (bit + 1)) | low;
}

/// Fixed number of reduction chunks, independent of the thread count.
inline constexpr std::size_t kReductionChunks = 64;

}  // namespace tnmpcqep::qsim
