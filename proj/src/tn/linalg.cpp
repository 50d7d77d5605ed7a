#include "tnmpcqep/tn/linalg.hpp"

#include <cmath>
#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::tn {

CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

namespace {

bool try_qr(const CMatrix& m, CMatrix& q) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::HouseholderQR<CMatrix> qr(m);
  const CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  double scale = 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) scale = std::max(scale, std::abs(r(j, j)));
  if (scale == 0.0 || !std::isfinite(scale)) return false;
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (std::abs(r(j, j)) <= 1e-12 * scale) return false;
  }
  q = qr.householderQ() * CMatrix::Identity(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return true;
}

}  // namespace

CMatrix qr_isometry(const CMatrix& m) {
  if (m.rows() < m.cols()) {
    throw UsageError("qr_isometry: need rows >= cols, got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw NumericError("qr_isometry: non-finite matrix");
  CMatrix q;
  if (try_qr(m, q)) return q;
  std::mt19937_64 rng(0x6a09e667f3bcc908ULL);
  const double base = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double jitter = base * std::pow(10.0, -8 + 2 * attempt);
    if (try_qr(m + jitter * random_complex(m.rows(), m.cols(), rng), q)) return q;
  }
  throw NumericError("qr_isometry: matrix is rank deficient even after regularization");
}

double isometry_defect(const CMatrix& q) {
  const CMatrix g = q.adjoint() * q - CMatrix::Identity(q.cols(), q.cols());
  return g.cwiseAbs().maxCoeff();
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) throw UsageError("unitarity_defect: matrix is not square");
  const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return std::max((u.adjoint() * u - id).cwiseAbs().maxCoeff(), (u * u.adjoint() - id).cwiseAbs().maxCoeff());
}

RVector realify(const CVector& psi) {
  RVector out(2 * psi.size());
  out.head(psi.size()) = psi.real();
  out.tail(psi.size()) = psi.imag();
  return out;
}

CVector normalized_or_basis(const CVector& psi) {
  const double norm = psi.norm();
  if (norm > 1e-300 && std::isfinite(norm)) return psi / norm;
  CVector e = CVector::Zero(psi.size());
  if (e.size() > 0) e(0) = 1.0;
  return e;
}

void require_finite(const RVector& x, const char* stage) {
  if (!x.allFinite()) throw NumericError(std::string("non-finite values in ") + stage);
}

}  // namespace tnmpcqep::tn
