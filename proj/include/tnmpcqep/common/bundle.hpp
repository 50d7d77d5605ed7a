#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tnmpcqep {

// One tensor inside a parameter bundle. Real tensors are stored with a zero
// imaginary part so that every entry is a (re, im) pair on disk.
struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<std::complex<double>> data;  // row-major

  std::size_t element_count() const;
};

// Flat binary container:
//   8 bytes  magic "TNMQPB01"
//   u64 LE   JSON header length in bytes
//   JSON     {"version","kind","seed","tensors":[{"name","shape","offset"}]}
//   payload  little-endian f64 (re, im) pairs, tensors back to back
struct ParamBundle {
  static constexpr int kVersion = 1;

  std::string kind;
  std::uint64_t seed = 0;
  std::vector<NamedTensor> tensors;

  const NamedTensor& at(const std::string& name) const;
  bool contains(const std::string& name) const;
  void add(NamedTensor tensor);
};

void write_bundle(std::ostream& out, const ParamBundle& bundle);
void write_bundle(const std::filesystem::path& path, const ParamBundle& bundle);
ParamBundle read_bundle(std::istream& in);
ParamBundle read_bundle(const std::filesystem::path& path);

}  // namespace tnmpcqep

#include <Eigen/Dense>

namespace tnmpcqep {

NamedTensor make_tensor(std::string name, const Eigen::MatrixXd& m);
NamedTensor make_tensor(std::string name, const Eigen::MatrixXcd& m);
NamedTensor make_tensor(std::string name, const Eigen::VectorXd& v);
NamedTensor make_scalar(std::string name, double value);

// Shape-checked views back into Eigen types. Vectors accept shape {n}.
Eigen::MatrixXd to_real_matrix(const NamedTensor& t);
Eigen::MatrixXcd to_complex_matrix(const NamedTensor& t);
Eigen::VectorXd to_real_vector(const NamedTensor& t);
double to_scalar(const NamedTensor& t);

}  // namespace tnmpcqep
