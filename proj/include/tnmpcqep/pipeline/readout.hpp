#pragma once

#include <array>
#include <vector>

#include "tnmpcqep/common/dense.hpp"

namespace tnmpcqep::pipeline {

/// Affine map d -> 2 followed by a softmax.
struct Readout {
  RMatrix weight;  // 2 x d
  RVector bias;    // 2

  static Readout zeros(Eigen::Index d);
  /// Rows of x are samples; returns the 2 logits per row.
  RMatrix logits(const RMatrix& x) const;
  /// Softmax probability of class 1 per sample.
  RVector scores(const RMatrix& x) const;
};

struct ReadoutGradient {
  RMatrix weight;
  RVector bias;
};

/// Class weights m / (2 m_c). Throws DomainError unless both classes occur.
std::array<double, 2> balanced_class_weights(const std::vector<int>& labels);

/// Mean over samples of c_{y} * (-log softmax(logits)_y).
double weighted_cross_entropy(const Readout& r, const RMatrix& x, const std::vector<int>& labels,
                              const std::array<double, 2>& class_weights);
ReadoutGradient weighted_cross_entropy_gradient(const Readout& r, const RMatrix& x, const std::vector<int>& labels,
                                                const std::array<double, 2>& class_weights);

struct ReadoutTraining {
  int steps = 500;
  double learning_rate = 0.5;
};

struct TrainedReadout {
  Readout readout;
  std::vector<double> loss_history;  // loss before each step, then the final loss
};

/// Full-batch gradient descent from zero weights. Throws DomainError on
/// single-class data and UsageError when fewer than two samples are given.
TrainedReadout train_readout(const RMatrix& x, const std::vector<int>& labels, const std::array<double, 2>& class_weights,
                             const ReadoutTraining& training = {});

/// Per-column mean and standard deviation (floored at 1e-12) of `x`.
struct Standardizer {
  RVector mean;
  RVector stddev;

  static Standardizer fit(const RMatrix& x);
  RMatrix apply(const RMatrix& x) const;
};

}  // namespace tnmpcqep::pipeline
