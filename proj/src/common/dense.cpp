#include "tnmpcqep/common/dense.hpp"

#include <cmath>
#include <utility>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep {

Linear::Linear(RMatrix w, RVector b) : weight(std::move(w)), bias(std::move(b)) {
  if (weight.rows() != bias.size()) {
    throw UsageError("Linear: bias length does not match output dimension");
  }
}

Linear Linear::random(Eigen::Index in, Eigen::Index out, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  RMatrix w(out, in);
  for (Eigen::Index r = 0; r < out; ++r) {
    for (Eigen::Index c = 0; c < in; ++c) w(r, c) = dist(rng);
  }
  RVector b(out);
  for (Eigen::Index r = 0; r < out; ++r) b(r) = dist(rng);
  return Linear(std::move(w), std::move(b));
}

RVector Linear::operator()(const RVector& x) const {
  if (x.size() != weight.cols()) {
    throw UsageError("Linear: input has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(weight.cols()));
  }
  return weight * x + bias;
}

RVector layer_norm(const RVector& x, double eps) {
  if (x.size() == 0) return x;
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  return (x.array() - mean) / std::sqrt(var + eps);
}

RVector relu(RVector x) {
  for (auto& v : x) v = v > 0.0 ? v : 0.0;
  return x;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

RVector shallow_block(const Linear& layer, const RVector& x) {
  return relu(layer_norm(layer(x)));
}

}  // namespace tnmpcqep
