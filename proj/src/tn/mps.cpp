#include "tnmpcqep/tn/mps.hpp"

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/tn/patches.hpp"

namespace tnmpcqep::tn {

std::vector<CVector> mps_site_vectors(const RVector& x, const MpsParams& params, const FrontendConfig& cfg) {
  require_finite(x, "mps input");
  const RVector z = shallow_block(params.premap, x);
  const int block = cfg.h / cfg.sites;
  std::vector<CVector> sites;
  sites.reserve(cfg.sites);
  for (int k = 0; k < cfg.sites; ++k) sites.push_back(params.embed(z.segment(k * block, block)));
  return sites;
}

CVector mps_contract(const std::vector<CVector>& sites, const std::vector<CMatrix>& cores, int d_phys) {
  if (sites.size() != cores.size()) throw UsageError("mps: site count does not match core count");
  if (cores.empty()) throw UsageError("mps: no cores");
  const Eigen::Index r = cores.front().cols();
  CVector v = CVector::Zero(r);
  v(0) = 1.0;
  for (std::size_t k = 0; k < cores.size(); ++k) {
    const CMatrix& a = cores[k];
    if (a.rows() != v.size() * d_phys || sites[k].size() != d_phys) throw UsageError("mps: core shape mismatch");
    // Kronecker product (v ⊗ z) indexes rows as alpha * d_phys + s.
    CVector vz(a.rows());
    for (Eigen::Index alpha = 0; alpha < v.size(); ++alpha) {
      vz.segment(alpha * d_phys, d_phys) = v(alpha) * sites[k];
    }
    v = normalized_or_basis(a.transpose() * vz);
  }
  return v;
}

CVector mps_state(const RVector& x, const MpsParams& params, const FrontendConfig& cfg) {
  if (x.size() != kImagePixels) throw UsageError("mps: expected a 784-vector input");
  return mps_contract(mps_site_vectors(x, params, cfg), params.cores, cfg.d_phys);
}

}  // namespace tnmpcqep::tn
