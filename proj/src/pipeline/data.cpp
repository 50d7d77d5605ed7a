#include "tnmpcqep/pipeline/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/tn/patches.hpp"

namespace tnmpcqep::pipeline {

void LabeledBatch::validate() const {
  if (images.rows() != static_cast<Eigen::Index>(labels.size())) throw UsageError("batch: image and label counts differ");
  if (images.rows() > 0 && images.cols() != tn::kImagePixels) throw UsageError("batch: images must have 784 pixels");
  if (images.size() > 0 && (images.minCoeff() < 0.0 || images.maxCoeff() > 1.0)) {
    throw UsageError("batch: pixels must lie in [0, 1]");
  }
  for (int l : labels) {
    if (l != 0 && l != 1) throw UsageError("batch: labels must be 0 or 1");
  }
}

std::size_t LabeledBatch::count(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

LabeledBatch synth_data(std::size_t n_samples, std::uint64_t seed, const SynthGeometry& g) {
  if (n_samples < 2) throw UsageError("synth_data: need at least 2 samples");
  constexpr int side = tn::kImageSide;
  LabeledBatch batch;
  batch.images.resize(static_cast<Eigen::Index>(n_samples), tn::kImagePixels);
  batch.labels.resize(n_samples);
  std::mt19937_64 rng(derive_seed(seed, "synth"));
  std::uniform_real_distribution<double> jitter(-g.center_jitter, g.center_jitter);
  std::uniform_real_distribution<double> noise(0.0, g.noise);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int label = static_cast<int>(i % 2);
    batch.labels[i] = label;
    const double cy = (label == 0 ? side * 0.25 : side * 0.75) + jitter(rng);
    const double cx = side * 0.5 + jitter(rng);
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        const double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
        const double v = g.amplitude * std::exp(-d2 / (2 * g.blob_sigma * g.blob_sigma)) + noise(rng);
        batch.images(static_cast<Eigen::Index>(i), r * side + c) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return batch;
}

LabeledBatch subset(const LabeledBatch& batch, const std::vector<std::size_t>& index) {
  LabeledBatch out;
  out.images.resize(static_cast<Eigen::Index>(index.size()), batch.images.cols());
  out.labels.resize(index.size());
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] >= batch.size()) throw UsageError("subset: index out of range");
    out.images.row(static_cast<Eigen::Index>(j)) = batch.images.row(static_cast<Eigen::Index>(index[j]));
    out.labels[j] = batch.labels[index[j]];
  }
  return out;
}

Split stratified_split(const LabeledBatch& batch, double second_fraction, std::uint64_t seed) {
  if (!(second_fraction >= 0.0 && second_fraction < 1.0)) throw UsageError("split: fraction must lie in [0, 1)");
  std::mt19937_64 rng(derive_seed(seed, "split"));
  std::vector<std::size_t> first, second;
  for (int label = 0; label <= 1; ++label) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch.labels[i] == label) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto take = static_cast<std::size_t>(std::llround(second_fraction * static_cast<double>(members.size())));
    second.insert(second.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    first.insert(first.end(), members.begin() + static_cast<std::ptrdiff_t>(take), members.end());
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {subset(batch, first), subset(batch, second)};
}

std::vector<std::vector<std::size_t>> stratified_partition(const std::vector<int>& labels, std::size_t n_clients) {
  if (n_clients == 0) throw UsageError("partition: need at least one client");
  std::vector<std::vector<std::size_t>> parts(n_clients);
  std::size_t next = 0;
  for (int label = 0; label <= 1; ++label) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != label) continue;
      parts[next].push_back(i);
      next = (next + 1) % n_clients;
    }
  }
  for (auto& p : parts) std::sort(p.begin(), p.end());
  return parts;
}

}  // namespace tnmpcqep::pipeline
