#include "tnmpcqep/tn/tree.hpp"

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/tn/patches.hpp"

namespace tnmpcqep::tn {

std::vector<CVector> tree_leaves(const RVector& x, const TreeParams& params) {
  require_finite(x, "tree input");
  const auto patches = patchify_flat(x);
  std::vector<CVector> leaves;
  leaves.reserve(patches.size());
  for (const auto& patch : patches) leaves.push_back(normalized_or_basis(params.embed(shallow_block(params.stem, patch))));
  return leaves;
}

CVector merge_pair(const CMatrix& q, const CVector& a, const CVector& b) {
  CVector joined(a.size() + b.size());
  joined << a, b;
  if (joined.size() != q.rows()) throw UsageError("tree: child dimensions do not match the isometry");
  return q.adjoint() * joined;
}

std::vector<CVector> coarse_grain(const std::vector<CVector>& states, const CMatrix& q) {
  if (states.size() % 2 != 0) throw UsageError("tree: odd number of states at a level");
  std::vector<CVector> parents;
  parents.reserve(states.size() / 2);
  for (std::size_t j = 0; j + 1 < states.size(); j += 2) {
    parents.push_back(normalized_or_basis(merge_pair(q, states[j], states[j + 1])));
  }
  return parents;
}

namespace {

void apply_pair(std::vector<CVector>& states, std::size_t a, const CMatrix& u) {
  const Eigen::Index n = states[a].size();
  CVector joined(2 * n);
  joined << states[a], states[a + 1];
  const CVector mixed = u * joined;
  states[a] = mixed.head(n);
  states[a + 1] = mixed.tail(n);
}

}  // namespace

void disentangle(std::vector<CVector>& states, const CMatrix& u) {
  for (std::size_t a = 0; a + 1 < states.size(); a += 2) apply_pair(states, a, u);
  for (std::size_t a = 1; a + 1 < states.size(); a += 2) apply_pair(states, a, u);
}

CVector ttn_contract(std::vector<CVector> leaves, const TreeParams& params) {
  for (const auto& q : params.isometries) leaves = coarse_grain(leaves, q);
  if (leaves.size() != 1) throw UsageError("tree: leaf count is not 2^levels");
  return leaves.front();
}

CVector mera_contract(std::vector<CVector> leaves, const TreeParams& params) {
  if (params.disentanglers.size() != params.isometries.size()) {
    throw UsageError("mera: one disentangler per level is required");
  }
  for (std::size_t l = 0; l < params.isometries.size(); ++l) {
    disentangle(leaves, params.disentanglers[l]);
    leaves = coarse_grain(leaves, params.isometries[l]);
  }
  if (leaves.size() != 1) throw UsageError("tree: leaf count is not 2^levels");
  return leaves.front();
}

CVector ttn_state(const RVector& x, const TreeParams& params) { return ttn_contract(tree_leaves(x, params), params); }

CVector mera_state(const RVector& x, const TreeParams& params) { return mera_contract(tree_leaves(x, params), params); }

}  // namespace tnmpcqep::tn
