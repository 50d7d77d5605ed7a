#include "tnmpcqep/pipeline/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::pipeline {
namespace {

std::uint32_t read_u32_be(std::istream& in, std::size_t offset) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError("idx: truncated header at byte offset " + std::to_string(offset));
  }
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

void expect_magic(std::uint32_t got, std::uint32_t want) {
  if (got != want) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "idx: bad magic 0x%08x at byte offset 0 (expected 0x%08x)", got, want);
    throw ParseError(buf);
  }
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t bytes, std::size_t offset) {
  std::vector<unsigned char> data(bytes);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got != bytes) throw ParseError("idx: truncated data at byte offset " + std::to_string(offset + got));
  return data;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("idx: cannot open " + path.string());
  return in;
}

}  // namespace

RMatrix read_idx_images(std::istream& in, int* rows, int* cols) {
  expect_magic(read_u32_be(in, 0), kIdxImageMagic);
  const std::uint32_t count = read_u32_be(in, 4);
  const std::uint32_t r = read_u32_be(in, 8);
  const std::uint32_t c = read_u32_be(in, 12);
  if (r == 0 || c == 0 || r > 4096 || c > 4096) throw ParseError("idx: implausible image size at byte offset 8");
  const std::size_t pixels = std::size_t{r} * c;
  const auto data = read_payload(in, std::size_t{count} * pixels, 16);
  RMatrix images(count, static_cast<Eigen::Index>(pixels));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t p = 0; p < pixels; ++p) {
      images(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = data[i * pixels + p] / 255.0;
    }
  }
  if (rows) *rows = static_cast<int>(r);
  if (cols) *cols = static_cast<int>(c);
  return images;
}

std::vector<int> read_idx_labels(std::istream& in) {
  expect_magic(read_u32_be(in, 0), kIdxLabelMagic);
  const std::uint32_t count = read_u32_be(in, 4);
  const auto data = read_payload(in, count, 8);
  return std::vector<int>(data.begin(), data.end());
}

LabeledBatch load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  auto image_in = open_in(images);
  auto label_in = open_in(labels);
  int rows = 0, cols = 0;
  LabeledBatch batch;
  batch.images = read_idx_images(image_in, &rows, &cols);
  if (rows != 28 || cols != 28) {
    throw ParseError("idx: expected 28x28 images, got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  batch.labels = read_idx_labels(label_in);
  if (batch.labels.size() != static_cast<std::size_t>(batch.images.rows())) {
    throw ParseError("idx: image file has " + std::to_string(batch.images.rows()) + " samples but label file has " +
                     std::to_string(batch.labels.size()));
  }
  for (auto& l : batch.labels) l = l != 0 ? 1 : 0;
  return batch;
}

void write_idx_images(std::ostream& out, const RMatrix& images, int rows, int cols) {
  if (images.cols() != static_cast<Eigen::Index>(rows) * cols) throw UsageError("idx: image width mismatch");
  write_u32_be(out, kIdxImageMagic);
  write_u32_be(out, static_cast<std::uint32_t>(images.rows()));
  write_u32_be(out, static_cast<std::uint32_t>(rows));
  write_u32_be(out, static_cast<std::uint32_t>(cols));
  for (Eigen::Index i = 0; i < images.rows(); ++i) {
    for (Eigen::Index p = 0; p < images.cols(); ++p) {
      const double v = std::clamp(images(i, p), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  }
}

void write_idx_labels(std::ostream& out, const std::vector<int>& labels) {
  write_u32_be(out, kIdxLabelMagic);
  write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  for (int l : labels) out.put(static_cast<char>(static_cast<unsigned char>(l)));
}

void save_idx(const LabeledBatch& batch, const std::filesystem::path& images, const std::filesystem::path& labels) {
  std::ofstream im(images, std::ios::binary), lb(labels, std::ios::binary);
  if (!im || !lb) throw ParseError("idx: cannot open output files");
  write_idx_images(im, batch.images);
  write_idx_labels(lb, batch.labels);
}

}  // namespace tnmpcqep::pipeline
