#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "tnmpcqep/pipeline/data.hpp"

namespace tnmpcqep::pipeline {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Unsigned-byte images (count x rows x cols), pixels scaled to [0, 1].
/// Throws ParseError naming the byte offset on bad magic or truncation.
RMatrix read_idx_images(std::istream& in, int* rows = nullptr, int* cols = nullptr);
std::vector<int> read_idx_labels(std::istream& in);

/// Images must be 28x28; labels are reduced to 0 / 1 (any non-zero is 1).
/// Throws ParseError when the two files disagree on the sample count.
LabeledBatch load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Pixels are rounded to bytes (v * 255).
void write_idx_images(std::ostream& out, const RMatrix& images, int rows = 28, int cols = 28);
void write_idx_labels(std::ostream& out, const std::vector<int>& labels);
void save_idx(const LabeledBatch& batch, const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace tnmpcqep::pipeline
