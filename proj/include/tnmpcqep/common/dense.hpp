#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace tnmpcqep {

using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Affine map y = W x + b with W stored as (out x in).
struct Linear {
  RMatrix weight;
  RVector bias;

  Linear() = default;
  Linear(RMatrix w, RVector b);

  /// Uniform(-1/sqrt(in), 1/sqrt(in)) initialization for weight and bias.
  static Linear random(Eigen::Index in, Eigen::Index out, std::mt19937_64& rng);

  Eigen::Index in_dim() const { return weight.cols(); }
  Eigen::Index out_dim() const { return weight.rows(); }
  RVector operator()(const RVector& x) const;
};

/// Zero-mean unit-variance normalization without affine parameters.
RVector layer_norm(const RVector& x, double eps = 1e-5);

RVector relu(RVector x);

double sigmoid(double x);

/// linear -> layer norm -> relu, the shared "shallow block" used by the
/// frontend pre-maps and stems.
RVector shallow_block(const Linear& layer, const RVector& x);

}  // namespace tnmpcqep
