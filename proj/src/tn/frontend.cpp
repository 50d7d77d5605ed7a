#include "tnmpcqep/tn/frontend.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/tn/patches.hpp"

namespace tnmpcqep::tn {
namespace {

constexpr const char* kBundleKind = "tn.frontend";
constexpr double kReprojectTolerance = 1e-8;

RMatrix make_projection(const FrontendConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, "tn.projection"));
  const int in = 2 * cfg.state_dim();
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(in)));
  RMatrix p(cfg.d, in);
  for (int r = 0; r < cfg.d; ++r) {
    for (int c = 0; c < in; ++c) p(r, c) = normal(rng);
  }
  return p;
}

void add_linear(ParamBundle& b, const std::string& prefix, const Linear& l) {
  b.add(make_tensor(prefix + ".weight", l.weight));
  b.add(make_tensor(prefix + ".bias", l.bias));
}

Linear read_linear(const ParamBundle& b, const std::string& prefix, Eigen::Index in, Eigen::Index out) {
  Linear l(to_real_matrix(b.at(prefix + ".weight")), to_real_vector(b.at(prefix + ".bias")));
  if (l.in_dim() != in || l.out_dim() != out) throw ParseError("frontend bundle: tensor " + prefix + " has the wrong shape");
  return l;
}

CMatrix read_isometry(const ParamBundle& b, const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  CMatrix q = to_complex_matrix(b.at(name));
  if (q.rows() != rows || q.cols() != cols) throw ParseError("frontend bundle: tensor " + name + " has the wrong shape");
  if (isometry_defect(q) > kReprojectTolerance) q = qr_isometry(q);
  return q;
}

int read_int(const ParamBundle& b, const std::string& name) {
  return static_cast<int>(std::lround(to_scalar(b.at(name))));
}

}  // namespace

Frontend::Frontend(FrontendConfig config) : config_(config) {
  config_.validate();
  if (config_.kind == FrontendKind::MPS) {
    mps_ = make_mps_params(config_);
  } else {
    tree_ = make_tree_params(config_);
  }
  projection_ = make_projection(config_);
}

const MpsParams& Frontend::mps() const {
  if (!mps_) throw UsageError("frontend: not an MPS frontend");
  return *mps_;
}

const TreeParams& Frontend::tree() const {
  if (!tree_) throw UsageError("frontend: not a tree frontend");
  return *tree_;
}

TreeParams& Frontend::tree() {
  if (!tree_) throw UsageError("frontend: not a tree frontend");
  return *tree_;
}

CVector Frontend::state(const RVector& x) const {
  if (x.size() != kImagePixels) throw UsageError("frontend: expected a 784-vector, got " + std::to_string(x.size()));
  switch (config_.kind) {
    case FrontendKind::MPS: return mps_state(x, *mps_, config_);
    case FrontendKind::TTN: return ttn_state(x, *tree_);
    case FrontendKind::MERA: return mera_state(x, *tree_);
  }
  throw UsageError("frontend: unknown kind");
}

RVector Frontend::encode(const RVector& x) const {
  RVector out = projection_ * realify(state(x));
  require_finite(out, "frontend output");
  return out;
}

RMatrix Frontend::encode_batch(const RMatrix& images, Backend backend) const {
  if (images.cols() != kImagePixels) throw UsageError("frontend: batch rows must have 784 pixels");
  RMatrix out(images.rows(), config_.d);
  const Eigen::Index n = images.rows();
  if (backend == Backend::OpenMP) {
    // Rows are independent; exceptions are collected and rethrown after the loop.
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4)
    for (Eigen::Index i = 0; i < n; ++i) {
      try {
        out.row(i) = encode(images.row(i).transpose()).transpose();
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) out.row(i) = encode(images.row(i).transpose()).transpose();
  }
  return out;
}

void Frontend::set_identity_disentanglers() {
  if (config_.kind != FrontendKind::MERA) throw UsageError("frontend: only MERA has disentanglers");
  for (auto& u : tree_->disentanglers) u = CMatrix::Identity(u.rows(), u.cols());
}

double Frontend::max_isometry_defect() const {
  double worst = 0.0;
  if (mps_) {
    for (const auto& a : mps_->cores) worst = std::max(worst, isometry_defect(a));
  }
  if (tree_) {
    for (const auto& q : tree_->isometries) worst = std::max(worst, isometry_defect(q));
    for (const auto& u : tree_->disentanglers) worst = std::max(worst, unitarity_defect(u));
  }
  return worst;
}

ParamBundle Frontend::to_bundle() const {
  ParamBundle b;
  b.kind = kBundleKind;
  b.seed = config_.seed;
  b.add(make_scalar("config.kind", static_cast<double>(static_cast<int>(config_.kind))));
  b.add(make_scalar("config.d", config_.d));
  b.add(make_scalar("config.h", config_.h));
  b.add(make_scalar("config.sites", config_.sites));
  b.add(make_scalar("config.d_loc", config_.d_loc));
  b.add(make_scalar("config.d_phys", config_.d_phys));
  b.add(make_scalar("config.bond", config_.bond));
  b.add(make_scalar("config.patches", config_.patches));
  b.add(make_scalar("config.d_p", config_.d_p));
  if (mps_) {
    add_linear(b, "mps.premap", mps_->premap);
    add_linear(b, "mps.embed.re", mps_->embed.re);
    add_linear(b, "mps.embed.im", mps_->embed.im);
    for (std::size_t k = 0; k < mps_->cores.size(); ++k) b.add(make_tensor("mps.core." + std::to_string(k), mps_->cores[k]));
  }
  if (tree_) {
    add_linear(b, "tree.stem", tree_->stem);
    add_linear(b, "tree.embed.re", tree_->embed.re);
    add_linear(b, "tree.embed.im", tree_->embed.im);
    for (std::size_t l = 0; l < tree_->isometries.size(); ++l) {
      b.add(make_tensor("tree.isometry." + std::to_string(l), tree_->isometries[l]));
    }
    for (std::size_t l = 0; l < tree_->disentanglers.size(); ++l) {
      b.add(make_tensor("tree.disentangler." + std::to_string(l), tree_->disentanglers[l]));
    }
  }
  b.add(make_tensor("projection", projection_));
  return b;
}

Frontend Frontend::from_bundle(const ParamBundle& b) {
  if (b.kind != kBundleKind) throw ParseError("bundle kind '" + b.kind + "' is not a frontend bundle");
  Frontend f;
  try {
    FrontendConfig& c = f.config_;
    const int kind = read_int(b, "config.kind");
    if (kind < 0 || kind > 2) throw ParseError("frontend bundle: invalid kind");
    c.kind = static_cast<FrontendKind>(kind);
    c.d = read_int(b, "config.d");
    c.h = read_int(b, "config.h");
    c.sites = read_int(b, "config.sites");
    c.d_loc = read_int(b, "config.d_loc");
    c.d_phys = read_int(b, "config.d_phys");
    c.bond = read_int(b, "config.bond");
    c.patches = read_int(b, "config.patches");
    c.d_p = read_int(b, "config.d_p");
    c.seed = b.seed;
    c.validate();
    if (c.kind == FrontendKind::MPS) {
      MpsParams p;
      p.premap = read_linear(b, "mps.premap", kImagePixels, c.h);
      p.embed.re = read_linear(b, "mps.embed.re", c.h / c.sites, c.d_phys);
      p.embed.im = read_linear(b, "mps.embed.im", c.h / c.sites, c.d_phys);
      for (int k = 0; k < c.sites; ++k) {
        p.cores.push_back(read_isometry(b, "mps.core." + std::to_string(k), static_cast<Eigen::Index>(c.bond) * c.d_phys, c.bond));
      }
      f.mps_ = std::move(p);
    } else {
      TreeParams p;
      p.stem = read_linear(b, "tree.stem", kPatchPixels, c.d_p);
      p.embed.re = read_linear(b, "tree.embed.re", c.d_p, c.d_loc);
      p.embed.im = read_linear(b, "tree.embed.im", c.d_p, c.d_loc);
      const int levels = tree_levels(c.patches);
      for (int l = 0; l < levels; ++l) {
        p.isometries.push_back(read_isometry(b, "tree.isometry." + std::to_string(l), 2 * c.d_loc, c.d_loc));
      }
      if (c.kind == FrontendKind::MERA) {
        for (int l = 0; l < levels; ++l) {
          p.disentanglers.push_back(read_isometry(b, "tree.disentangler." + std::to_string(l), 2 * c.d_loc, 2 * c.d_loc));
        }
      }
      f.tree_ = std::move(p);
    }
    f.projection_ = to_real_matrix(b.at("projection"));
    if (f.projection_.rows() != c.d || f.projection_.cols() != 2 * c.state_dim()) {
      throw ParseError("frontend bundle: projection has the wrong shape");
    }
  } catch (const UsageError& e) {
    throw ParseError(std::string("frontend bundle: ") + e.what());
  }
  return f;
}

void Frontend::save(const std::filesystem::path& path) const { write_bundle(path, to_bundle()); }

Frontend Frontend::load(const std::filesystem::path& path) { return from_bundle(read_bundle(path)); }

namespace {
RVector encode_as(const RVector& x, const Frontend& f, FrontendKind kind) {
  if (f.kind() != kind) throw UsageError("frontend is " + to_string(f.kind()) + ", not " + to_string(kind));
  return f.encode(x);
}
}  // namespace

RVector mps_encode(const RVector& x, const Frontend& f) { return encode_as(x, f, FrontendKind::MPS); }
RVector ttn_encode(const RVector& x, const Frontend& f) { return encode_as(x, f, FrontendKind::TTN); }
RVector mera_encode(const RVector& x, const Frontend& f) { return encode_as(x, f, FrontendKind::MERA); }

}  // namespace tnmpcqep::tn
