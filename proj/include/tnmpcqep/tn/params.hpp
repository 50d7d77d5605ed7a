#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tnmpcqep/common/dense.hpp"
#include "tnmpcqep/tn/linalg.hpp"

namespace tnmpcqep::tn {

enum class FrontendKind { MPS, TTN, MERA };

std::string to_string(FrontendKind kind);
/// Accepts "mps", "ttn", "mera" in any case. Throws UsageError otherwise.
FrontendKind parse_frontend_kind(const std::string& text);

struct FrontendConfig {
  FrontendKind kind = FrontendKind::TTN;
  int d = 64;          // latent dimension
  int h = 256;         // MPS pre-feature width
  int sites = 16;      // MPS site count
  int d_loc = 16;      // tree local complex dimension
  int d_phys = 8;      // MPS physical dimension
  int bond = 8;        // MPS bond dimension
  int patches = 16;    // tree leaf count (7x7 patches of a 28x28 image)
  int d_p = 32;        // patch feature width
  std::uint64_t seed = 0;

  /// Throws UsageError on inconsistent dimensions.
  void validate() const;
  /// Length of the complex state handed to realification.
  int state_dim() const { return kind == FrontendKind::MPS ? bond : d_loc; }
};

/// Two real affine maps giving the real and imaginary parts.
struct ComplexEmbedding {
  Linear re;
  Linear im;

  static ComplexEmbedding random(Eigen::Index in, Eigen::Index out, std::mt19937_64& rng);
  CVector operator()(const RVector& x) const;
};

struct MpsParams {
  Linear premap;                // 784 -> h
  ComplexEmbedding embed;       // h/sites -> d_phys, shared by all sites
  std::vector<CMatrix> cores;   // per site, (bond * d_phys) x bond, row = alpha * d_phys + s
};

struct TreeParams {
  Linear stem;                        // 49 -> d_p, shared by all patches
  ComplexEmbedding embed;             // d_p -> d_loc
  std::vector<CMatrix> isometries;    // per level Q (2 d_loc x d_loc); the merge applies Q^H
  std::vector<CMatrix> disentanglers; // per level U (2 d_loc x 2 d_loc); empty for TTN
};

MpsParams make_mps_params(const FrontendConfig& cfg);
/// Tree parameters share their seeded sub-streams between TTN and MERA, so a
/// MERA with identity disentanglers reproduces the TTN of the same seed.
TreeParams make_tree_params(const FrontendConfig& cfg);

int tree_levels(int leaves);

}  // namespace tnmpcqep::tn
