#pragma once

#include <vector>

#include "tnmpcqep/tn/params.hpp"

namespace tnmpcqep::tn {

/// Patchify, shared stem, complex embedding; each leaf normalized.
std::vector<CVector> tree_leaves(const RVector& x, const TreeParams& params);

/// Parent = Q^H [a ; b], unnormalized.
CVector merge_pair(const CMatrix& q, const CVector& a, const CVector& b);

/// Merge neighbours (0,1), (2,3), ... and normalize every parent.
std::vector<CVector> coarse_grain(const std::vector<CVector>& states, const CMatrix& q);

/// U on pairs (0,1), (2,3), ... then on (1,2), (3,4), ...; no wrap-around.
void disentangle(std::vector<CVector>& states, const CMatrix& u);

CVector ttn_contract(std::vector<CVector> leaves, const TreeParams& params);
CVector mera_contract(std::vector<CVector> leaves, const TreeParams& params);

CVector ttn_state(const RVector& x, const TreeParams& params);
CVector mera_state(const RVector& x, const TreeParams& params);

}  // namespace tnmpcqep::tn
