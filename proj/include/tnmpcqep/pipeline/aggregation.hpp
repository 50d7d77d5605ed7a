#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tnmpcqep/common/dense.hpp"
#include "tnmpcqep/mpc/meter.hpp"

namespace tnmpcqep::pipeline {

struct AggregationConfig {
  double epsilon = 1e-6;
  unsigned bits = 64;
  unsigned fraction_bits = 20;
  unsigned theta = 5;
  /// The shared reciprocal is computed as 2^shift / (W + eps) and the shift is
  /// removed in the final truncation, keeping precision for large W.
  unsigned reciprocal_shift = 12;
  mpc::SecurityMode mode = mpc::SecurityMode::Passive;
  std::uint64_t seed = 0;

  void validate() const;
};

/// x = (sum_i w_i f_i) / (sum_i w_i + eps); rows of `features` are clients.
/// Throws DomainError when the weights sum to zero, UsageError on negative
/// weights or shape mismatch.
RVector aggregate_plain(const RMatrix& features, std::span<const double> weights, double epsilon);

/// Per-sample aggregation: client_features[i] holds client i's latent for each
/// sample (rows = samples). Returns one aggregate per sample.
RMatrix aggregate_plain_batch(const std::vector<RMatrix>& client_features, std::span<const double> weights,
                              double epsilon);

struct SecureAggregate {
  RMatrix x;  // rows = samples
  mpc::CostReport cost;
};

/// The same aggregation computed by the three-party protocol: each client
/// shares (f_i, w_i) per sample, the nodes compute the weighted sums and
/// W + eps, one Goldschmidt reciprocal per sample, d fixed-point
/// multiplications, and open only x. The cost is the bench normalization
/// scenario times the number of samples. Throws DomainError on all-zero
/// weights and RangeError when inputs exceed the fixed-point range; both are
/// checked before the protocol starts.
SecureAggregate aggregate_secure_batch(const std::vector<RMatrix>& client_features, std::span<const double> weights,
                                       const AggregationConfig& config);
SecureAggregate aggregate_secure(const RMatrix& features, std::span<const double> weights,
                                 const AggregationConfig& config);

}  // namespace tnmpcqep::pipeline
