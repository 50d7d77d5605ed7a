#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "tnmpcqep/common/dense.hpp"

namespace tnmpcqep::tn {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Entries with independent standard normal real and imaginary parts.
CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Orthonormal basis Q (m x n) of the column span of M (m >= n) from a
/// Householder QR, with column phases chosen so that diag(R) is real and
/// positive. A rank-deficient M is retried with a small seeded jitter; if that
/// still fails NumericError is thrown.
CMatrix qr_isometry(const CMatrix& m);

/// max |Q^H Q - I|.
double isometry_defect(const CMatrix& q);
/// max(|U^H U - I|, |U U^H - I|) for a square U.
double unitarity_defect(const CMatrix& u);

/// [Re(psi); Im(psi)].
RVector realify(const CVector& psi);

/// psi / ||psi||, or e_1 when psi is (numerically) zero.
CVector normalized_or_basis(const CVector& psi);

/// Throws NumericError if any entry is NaN or infinite.
void require_finite(const RVector& x, const char* stage);

}  // namespace tnmpcqep::tn
