#include "tnmpcqep/pipeline/readout.hpp"

#include <cmath>
#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::pipeline {
namespace {

void check_inputs(const Readout& r, const RMatrix& x, const std::vector<int>& labels) {
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) throw UsageError("readout: sample and label counts differ");
  if (x.cols() != r.weight.cols()) throw UsageError("readout: feature width mismatch");
}

// Row-wise log-softmax of 2-column logits.
RMatrix log_softmax(const RMatrix& logits) {
  RMatrix out(logits.rows(), 2);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = std::max(logits(i, 0), logits(i, 1));
    const double lse = m + std::log(std::exp(logits(i, 0) - m) + std::exp(logits(i, 1) - m));
    out(i, 0) = logits(i, 0) - lse;
    out(i, 1) = logits(i, 1) - lse;
  }
  return out;
}

}  // namespace

Readout Readout::zeros(Eigen::Index d) { return {RMatrix::Zero(2, d), RVector::Zero(2)}; }

RMatrix Readout::logits(const RMatrix& x) const {
  RMatrix out = x * weight.transpose();
  out.rowwise() += bias.transpose();
  return out;
}

RVector Readout::scores(const RMatrix& x) const {
  const RMatrix ls = log_softmax(logits(x));
  return ls.col(1).array().exp();
}

std::array<double, 2> balanced_class_weights(const std::vector<int>& labels) {
  double counts[2] = {0, 0};
  for (int l : labels) {
    if (l != 0 && l != 1) throw UsageError("readout: labels must be 0 or 1");
    counts[l] += 1;
  }
  if (counts[0] == 0 || counts[1] == 0) throw DomainError("readout: both classes must be present");
  const double m = static_cast<double>(labels.size());
  return {m / (2 * counts[0]), m / (2 * counts[1])};
}

double weighted_cross_entropy(const Readout& r, const RMatrix& x, const std::vector<int>& labels,
                              const std::array<double, 2>& class_weights) {
  check_inputs(r, x, labels);
  const RMatrix ls = log_softmax(r.logits(x));
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    loss -= class_weights[y] * ls(i, y);
  }
  return loss / static_cast<double>(x.rows());
}

ReadoutGradient weighted_cross_entropy_gradient(const Readout& r, const RMatrix& x, const std::vector<int>& labels,
                                                const std::array<double, 2>& class_weights) {
  check_inputs(r, x, labels);
  const RMatrix ls = log_softmax(r.logits(x));
  // dL/dlogits_i = c_y (softmax_i - onehot_i) / m
  RMatrix delta = ls.array().exp();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    delta(i, y) -= 1.0;
    delta.row(i) *= class_weights[y] / static_cast<double>(x.rows());
  }
  return {delta.transpose() * x, delta.colwise().sum().transpose()};
}

TrainedReadout train_readout(const RMatrix& x, const std::vector<int>& labels, const std::array<double, 2>& class_weights,
                             const ReadoutTraining& training) {
  if (x.rows() < 2) throw UsageError("readout: need at least two samples");
  (void)balanced_class_weights(labels);  // both classes present
  if (training.steps < 0 || !(training.learning_rate > 0)) throw UsageError("readout: invalid training settings");
  TrainedReadout out{Readout::zeros(x.cols()), {}};
  out.loss_history.reserve(static_cast<std::size_t>(training.steps) + 1);
  for (int step = 0; step < training.steps; ++step) {
    out.loss_history.push_back(weighted_cross_entropy(out.readout, x, labels, class_weights));
    const auto g = weighted_cross_entropy_gradient(out.readout, x, labels, class_weights);
    out.readout.weight -= training.learning_rate * g.weight;
    out.readout.bias -= training.learning_rate * g.bias;
  }
  out.loss_history.push_back(weighted_cross_entropy(out.readout, x, labels, class_weights));
  if (!std::isfinite(out.loss_history.back())) throw NumericError("readout: training diverged");
  return out;
}

Standardizer Standardizer::fit(const RMatrix& x) {
  if (x.rows() == 0) throw UsageError("standardizer: empty matrix");
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  s.stddev.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().mean();
    s.stddev(j) = std::max(std::sqrt(var), 1e-12);
  }
  return s;
}

RMatrix Standardizer::apply(const RMatrix& x) const {
  if (x.cols() != mean.size()) throw UsageError("standardizer: width mismatch");
  RMatrix out = x.rowwise() - mean.transpose();
  return out.array().rowwise() / stddev.transpose().array();
}

}  // namespace tnmpcqep::pipeline
