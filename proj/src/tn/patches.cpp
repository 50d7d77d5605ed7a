#include "tnmpcqep/tn/patches.hpp"

#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::tn {
namespace {
constexpr int kBlocksPerRow = kImageSide / kPatchSide;
}

std::vector<RVector> patchify(const RMatrix& image) {
  if (image.rows() != kImageSide || image.cols() != kImageSide) {
    throw UsageError("patchify: expected a 28x28 image, got " + std::to_string(image.rows()) + "x" +
                     std::to_string(image.cols()));
  }
  std::vector<RVector> patches(kPatchCount, RVector(kPatchPixels));
  for (int b = 0; b < kPatchCount; ++b) {
    const int r0 = (b / kBlocksPerRow) * kPatchSide;
    const int c0 = (b % kBlocksPerRow) * kPatchSide;
    for (int i = 0; i < kPatchSide; ++i) {
      for (int j = 0; j < kPatchSide; ++j) patches[b](i * kPatchSide + j) = image(r0 + i, c0 + j);
    }
  }
  return patches;
}

std::vector<RVector> patchify_flat(const RVector& pixels) { return patchify(to_image(pixels)); }

RMatrix unpatchify(const std::vector<RVector>& patches) {
  if (patches.size() != static_cast<std::size_t>(kPatchCount)) throw UsageError("unpatchify: expected 16 patches");
  RMatrix image(kImageSide, kImageSide);
  for (int b = 0; b < kPatchCount; ++b) {
    if (patches[b].size() != kPatchPixels) throw UsageError("unpatchify: patch must have 49 entries");
    const int r0 = (b / kBlocksPerRow) * kPatchSide;
    const int c0 = (b % kBlocksPerRow) * kPatchSide;
    for (int i = 0; i < kPatchSide; ++i) {
      for (int j = 0; j < kPatchSide; ++j) image(r0 + i, c0 + j) = patches[b](i * kPatchSide + j);
    }
  }
  return image;
}

RMatrix to_image(const RVector& pixels) {
  if (pixels.size() != kImagePixels) {
    throw UsageError("expected 784 pixels, got " + std::to_string(pixels.size()));
  }
  RMatrix image(kImageSide, kImageSide);
  for (int i = 0; i < kImageSide; ++i) {
    for (int j = 0; j < kImageSide; ++j) image(i, j) = pixels(i * kImageSide + j);
  }
  return image;
}

RVector flatten(const RMatrix& image) {
  RVector out(image.rows() * image.cols());
  for (Eigen::Index i = 0; i < image.rows(); ++i) {
    for (Eigen::Index j = 0; j < image.cols(); ++j) out(i * image.cols() + j) = image(i, j);
  }
  return out;
}

}  // namespace tnmpcqep::tn
