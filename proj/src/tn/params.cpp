#include "tnmpcqep/tn/params.hpp"

#include <algorithm>
#include <cctype>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/tn/patches.hpp"

namespace tnmpcqep::tn {

std::string to_string(FrontendKind kind) {
  switch (kind) {
    case FrontendKind::MPS: return "mps";
    case FrontendKind::TTN: return "ttn";
    case FrontendKind::MERA: return "mera";
  }
  return "?";
}

FrontendKind parse_frontend_kind(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "mps") return FrontendKind::MPS;
  if (lower == "ttn") return FrontendKind::TTN;
  if (lower == "mera") return FrontendKind::MERA;
  throw UsageError("unknown frontend '" + text + "' (expected mps, ttn or mera)");
}

int tree_levels(int leaves) {
  int levels = 0;
  while ((1 << levels) < leaves) ++levels;
  return levels;
}

void FrontendConfig::validate() const {
  if (d < 1) throw UsageError("frontend: d must be positive");
  if (kind == FrontendKind::MPS) {
    if (h < 1 || sites < 1 || h % sites != 0) throw UsageError("frontend: h must be a positive multiple of the site count");
    if (d_phys < 1 || bond < 1) throw UsageError("frontend: d_phys and bond must be positive");
  } else {
    if (patches != kPatchCount) throw UsageError("frontend: tree frontends use 16 patches of 7x7");
    if (d_loc < 1 || (d_loc & (d_loc - 1)) != 0) throw UsageError("frontend: d_loc must be a power of two");
    if (d_p < 1) throw UsageError("frontend: d_p must be positive");
  }
}

ComplexEmbedding ComplexEmbedding::random(Eigen::Index in, Eigen::Index out, std::mt19937_64& rng) {
  ComplexEmbedding e;
  e.re = Linear::random(in, out, rng);
  e.im = Linear::random(in, out, rng);
  return e;
}

CVector ComplexEmbedding::operator()(const RVector& x) const {
  const RVector r = re(x);
  const RVector i = im(x);
  CVector out(r.size());
  for (Eigen::Index j = 0; j < r.size(); ++j) out(j) = Complex(r(j), i(j));
  return out;
}

MpsParams make_mps_params(const FrontendConfig& cfg) {
  cfg.validate();
  MpsParams p;
  std::mt19937_64 premap_rng(derive_seed(cfg.seed, "tn.mps.premap"));
  p.premap = Linear::random(kImagePixels, cfg.h, premap_rng);
  std::mt19937_64 embed_rng(derive_seed(cfg.seed, "tn.mps.embed"));
  p.embed = ComplexEmbedding::random(cfg.h / cfg.sites, cfg.d_phys, embed_rng);
  std::mt19937_64 core_rng(derive_seed(cfg.seed, "tn.mps.cores"));
  for (int k = 0; k < cfg.sites; ++k) {
    p.cores.push_back(qr_isometry(random_complex(static_cast<Eigen::Index>(cfg.bond) * cfg.d_phys, cfg.bond, core_rng)));
  }
  return p;
}

TreeParams make_tree_params(const FrontendConfig& cfg) {
  cfg.validate();
  TreeParams p;
  std::mt19937_64 stem_rng(derive_seed(cfg.seed, "tn.tree.stem"));
  p.stem = Linear::random(kPatchPixels, cfg.d_p, stem_rng);
  std::mt19937_64 embed_rng(derive_seed(cfg.seed, "tn.tree.embed"));
  p.embed = ComplexEmbedding::random(cfg.d_p, cfg.d_loc, embed_rng);
  const int levels = tree_levels(cfg.patches);
  std::mt19937_64 iso_rng(derive_seed(cfg.seed, "tn.tree.isometries"));
  for (int l = 0; l < levels; ++l) {
    p.isometries.push_back(qr_isometry(random_complex(2 * cfg.d_loc, cfg.d_loc, iso_rng)));
  }
  if (cfg.kind == FrontendKind::MERA) {
    std::mt19937_64 u_rng(derive_seed(cfg.seed, "tn.mera.disentanglers"));
    for (int l = 0; l < levels; ++l) {
      p.disentanglers.push_back(qr_isometry(random_complex(2 * cfg.d_loc, 2 * cfg.d_loc, u_rng)));
    }
  }
  return p;
}

}  // namespace tnmpcqep::tn
