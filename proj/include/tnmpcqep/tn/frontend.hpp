#pragma once

#include <filesystem>
#include <optional>

#include "tnmpcqep/common/backend.hpp"
#include "tnmpcqep/common/bundle.hpp"
#include "tnmpcqep/tn/mps.hpp"
#include "tnmpcqep/tn/tree.hpp"

namespace tnmpcqep::tn {

/// A seeded tensor-network encoder from a 784-pixel image to a real d-vector:
/// frontend-specific contraction to a unit complex state, realification,
/// then a fixed random projection.
class Frontend {
 public:
  explicit Frontend(FrontendConfig config);

  const FrontendConfig& config() const { return config_; }
  FrontendKind kind() const { return config_.kind; }

  /// Final unit-norm complex state before realification.
  CVector state(const RVector& x) const;
  RVector encode(const RVector& x) const;
  /// Rows of `images` are 784-pixel samples; returns one latent per row.
  RMatrix encode_batch(const RMatrix& images, Backend backend = Backend::OpenMP) const;

  const MpsParams& mps() const;
  const TreeParams& tree() const;
  TreeParams& tree();
  const RMatrix& projection() const { return projection_; }

  /// Replace every disentangler with the identity (MERA only).
  void set_identity_disentanglers();

  /// Largest isometry/unitarity defect over all cores, isometries and
  /// disentanglers.
  double max_isometry_defect() const;

  ParamBundle to_bundle() const;
  /// Throws ParseError when the bundle is not a frontend bundle or its
  /// tensors have the wrong shapes.
  static Frontend from_bundle(const ParamBundle& bundle);
  void save(const std::filesystem::path& path) const;
  static Frontend load(const std::filesystem::path& path);

 private:
  Frontend() = default;

  FrontendConfig config_;
  std::optional<MpsParams> mps_;
  std::optional<TreeParams> tree_;
  RMatrix projection_;
};

RVector mps_encode(const RVector& x, const Frontend& frontend);
RVector ttn_encode(const RVector& x, const Frontend& frontend);
RVector mera_encode(const RVector& x, const Frontend& frontend);

}  // namespace tnmpcqep::tn
