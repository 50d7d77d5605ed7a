#pragma once

#include <cstdint>
#include <vector>

#include "tnmpcqep/common/dense.hpp"

namespace tnmpcqep::pipeline {

/// Label 0 = normal, 1 = pneumonia (or the synthetic stand-ins).
struct LabeledBatch {
  RMatrix images;           // one flattened 28x28 image per row, pixels in [0, 1]
  std::vector<int> labels;  // 0 or 1

  std::size_t size() const { return labels.size(); }
  /// Throws UsageError on shape mismatch, pixels outside [0, 1] or non-binary labels.
  void validate() const;
  std::size_t count(int label) const;
};

struct SynthGeometry {
  double blob_sigma = 4.0;     // pixels
  double amplitude = 0.8;
  double noise = 0.1;          // uniform pixel noise in [0, noise)
  double center_jitter = 3.0;  // pixels
};

/// Two-class images: class 0 has a smooth blob in the upper half, class 1 in
/// the lower half. Labels alternate 0, 1, 0, ... so classes are balanced.
LabeledBatch synth_data(std::size_t n_samples, std::uint64_t seed, const SynthGeometry& geometry = {});

LabeledBatch subset(const LabeledBatch& batch, const std::vector<std::size_t>& index);

/// Stratified split: a seeded fraction of each class goes to `second`.
struct Split {
  LabeledBatch first;
  LabeledBatch second;
};
Split stratified_split(const LabeledBatch& batch, double second_fraction, std::uint64_t seed);

/// Round-robin over clients within each class, the client counter carrying
/// over from one class to the next. Returns sample indices per client.
std::vector<std::vector<std::size_t>> stratified_partition(const std::vector<int>& labels, std::size_t n_clients);

}  // namespace tnmpcqep::pipeline
