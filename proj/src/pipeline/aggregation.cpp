#include "tnmpcqep/pipeline/aggregation.hpp"

#include <cmath>
#include <string>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/mpc/session.hpp"

namespace tnmpcqep::pipeline {
namespace {

double checked_total(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("aggregation: weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0) throw DomainError("aggregation: weights sum to zero");
  return total;
}

void check_clients(const std::vector<RMatrix>& client_features, std::span<const double> weights) {
  if (client_features.empty()) throw UsageError("aggregation: no clients");
  if (client_features.size() != weights.size()) throw UsageError("aggregation: one weight per client is required");
  for (const auto& f : client_features) {
    if (f.rows() != client_features.front().rows() || f.cols() != client_features.front().cols()) {
      throw UsageError("aggregation: client feature shapes differ");
    }
  }
}

}  // namespace

void AggregationConfig::validate() const {
  if (!(epsilon > 0.0)) throw UsageError("aggregation: epsilon must be positive");
  if (bits < 16 || bits > 64) throw UsageError("aggregation: k must be in [16, 64]");
  if (theta == 0) throw UsageError("aggregation: theta must be positive");
  if (2 * fraction_bits + reciprocal_shift + 4 > bits) throw UsageError("aggregation: F and shift too large for k");
}

RVector aggregate_plain(const RMatrix& features, std::span<const double> weights, double epsilon) {
  if (features.rows() != static_cast<Eigen::Index>(weights.size())) {
    throw UsageError("aggregation: one weight per client row is required");
  }
  const double total = checked_total(weights);
  RVector sum = RVector::Zero(features.cols());
  for (Eigen::Index i = 0; i < features.rows(); ++i) sum += weights[static_cast<std::size_t>(i)] * features.row(i).transpose();
  return sum / (total + epsilon);
}

RMatrix aggregate_plain_batch(const std::vector<RMatrix>& client_features, std::span<const double> weights,
                              double epsilon) {
  check_clients(client_features, weights);
  const double total = checked_total(weights);
  RMatrix sum = RMatrix::Zero(client_features.front().rows(), client_features.front().cols());
  for (std::size_t i = 0; i < client_features.size(); ++i) sum += weights[i] * client_features[i];
  return sum / (total + epsilon);
}

SecureAggregate aggregate_secure_batch(const std::vector<RMatrix>& client_features, std::span<const double> weights,
                                       const AggregationConfig& config) {
  config.validate();
  check_clients(client_features, weights);
  const double total = checked_total(weights);
  const auto m = static_cast<std::size_t>(client_features.front().rows());
  const auto d = static_cast<std::size_t>(client_features.front().cols());
  if (m == 0 || d == 0) throw UsageError("aggregation: empty feature matrix");

  const mpc::FixedPointCodec codec(config.bits, config.fraction_bits);
  const unsigned f = config.fraction_bits;
  // Products at scale 2^(2F) must stay below 2^(k-2) for truncation, and so
  // must x * 2^shift at scale 2^(2F) in the final multiplication.
  const double product_bound = std::ldexp(1.0, static_cast<int>(config.bits - 3 - 2 * f));
  const double output_bound = std::ldexp(1.0, static_cast<int>(config.bits - 3 - 2 * f - config.reciprocal_shift));
  double max_feature = 0.0;
  for (std::size_t i = 0; i < client_features.size(); ++i) {
    const double mf = client_features[i].cwiseAbs().maxCoeff();
    if (!std::isfinite(mf)) throw RangeError("aggregation: non-finite feature");
    max_feature = std::max(max_feature, mf);
    if (mf * weights[i] >= product_bound) throw RangeError("aggregation: weighted feature exceeds the fixed-point range");
  }
  if (max_feature >= output_bound) throw RangeError("aggregation: feature magnitude exceeds the fixed-point range");
  if (total + config.epsilon >= std::ldexp(1.0, static_cast<int>(config.bits - 3 - f))) {
    throw RangeError("aggregation: total weight exceeds the fixed-point range");
  }

  mpc::Session session({config.bits, config.mode, derive_seed(config.seed, "aggregation.session")});
  // Sample-major layout: element s * d + j is coordinate j of sample s.
  const std::size_t md = m * d;
  std::vector<std::size_t> weight_index(md);
  for (std::size_t e = 0; e < md; ++e) weight_index[e] = md + e / d;
  mpc::SharedVector weighted_sum(config.bits, md);
  mpc::SharedVector weight_total(config.bits, m);
  for (std::size_t i = 0; i < client_features.size(); ++i) {
    std::vector<double> upload(md + m);
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t j = 0; j < d; ++j) {
        upload[s * d + j] = client_features[i](static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
      }
      upload[md + s] = weights[i];
    }
    const auto shared = session.share_fixed(upload, codec);
    weighted_sum = session.secure_add(weighted_sum, session.fixed_mul(shared.slice(0, md), shared.gather(weight_index), codec));
    weight_total = session.secure_add(weight_total, shared.slice(md, m));
  }
  const auto den = session.add_constant(weight_total, ring::encode_fixed_word(config.epsilon, codec));
  const auto numerator = session.public_constant(ring::encode_fixed_word(std::ldexp(1.0, static_cast<int>(config.reciprocal_shift)), codec), m);
  const auto reciprocal = session.secure_div(numerator, den, codec, config.theta);
  std::vector<std::size_t> sample_index(md);
  for (std::size_t e = 0; e < md; ++e) sample_index[e] = e / d;
  const auto x_shared = session.truncate(session.secure_mul(weighted_sum, reciprocal.gather(sample_index)),
                                         f + config.reciprocal_shift);
  const auto opened = session.reconstruct_fixed(x_shared, codec);

  SecureAggregate out;
  out.x.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t j = 0; j < d; ++j) out.x(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = opened[s * d + j];
  }
  out.cost = session.meter().report();
  return out;
}

SecureAggregate aggregate_secure(const RMatrix& features, std::span<const double> weights,
                                 const AggregationConfig& config) {
  std::vector<RMatrix> clients;
  clients.reserve(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) clients.emplace_back(features.row(i));
  if (clients.size() != weights.size()) throw UsageError("aggregation: one weight per client row is required");
  return aggregate_secure_batch(clients, weights, config);
}

}  // namespace tnmpcqep::pipeline
