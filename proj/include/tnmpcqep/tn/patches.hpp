#pragma once

#include <vector>

#include "tnmpcqep/common/dense.hpp"

namespace tnmpcqep::tn {

inline constexpr int kImageSide = 28;
inline constexpr int kImagePixels = kImageSide * kImageSide;
inline constexpr int kPatchSide = 7;
inline constexpr int kPatchPixels = kPatchSide * kPatchSide;
inline constexpr int kPatchCount = (kImageSide / kPatchSide) * (kImageSide / kPatchSide);

/// Non-overlapping 7x7 blocks in row-major block order, each flattened
/// row-major. Accepts a 28x28 matrix or a flattened 784-vector.
std::vector<RVector> patchify(const RMatrix& image);
std::vector<RVector> patchify_flat(const RVector& pixels);

/// Inverse of patchify.
RMatrix unpatchify(const std::vector<RVector>& patches);

/// Row-major reshapes between 784-vectors and 28x28 images.
RMatrix to_image(const RVector& pixels);
RVector flatten(const RMatrix& image);

}  // namespace tnmpcqep::tn
