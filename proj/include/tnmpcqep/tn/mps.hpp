#pragma once

#include <vector>

#include "tnmpcqep/tn/params.hpp"

namespace tnmpcqep::tn {

/// Pre-map, block split and complex embedding: one d_phys vector per site.
std::vector<CVector> mps_site_vectors(const RVector& x, const MpsParams& params, const FrontendConfig& cfg);

/// v_beta <- sum_{alpha,s} v_alpha A_{alpha s beta} z_s from the boundary
/// state e_1, normalizing after every site.
CVector mps_contract(const std::vector<CVector>& sites, const std::vector<CMatrix>& cores, int d_phys);

CVector mps_state(const RVector& x, const MpsParams& params, const FrontendConfig& cfg);

}  // namespace tnmpcqep::tn
