#include "tnmpcqep/common/bundle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep {
namespace {

constexpr std::array<char, 8> kMagic = {'T', 'N', 'M', 'Q', 'P', 'B', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in, std::uint64_t offset) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw ParseError("bundle: truncated at byte offset " + std::to_string(offset));
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

std::size_t NamedTensor::element_count() const {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

const NamedTensor& ParamBundle::at(const std::string& name) const {
  auto it = std::find_if(tensors.begin(), tensors.end(),
                         [&](const NamedTensor& t) { return t.name == name; });
  if (it == tensors.end()) throw ParseError("bundle: missing tensor '" + name + "'");
  return *it;
}

bool ParamBundle::contains(const std::string& name) const {
  return std::any_of(tensors.begin(), tensors.end(),
                     [&](const NamedTensor& t) { return t.name == name; });
}

void ParamBundle::add(NamedTensor tensor) {
  if (tensor.data.size() != tensor.element_count()) {
    throw UsageError("bundle: tensor '" + tensor.name + "' data does not match its shape");
  }
  if (contains(tensor.name)) throw UsageError("bundle: duplicate tensor '" + tensor.name + "'");
  tensors.push_back(std::move(tensor));
}

void write_bundle(std::ostream& out, const ParamBundle& bundle) {
  nlohmann::json header;
  header["version"] = ParamBundle::kVersion;
  header["kind"] = bundle.kind;
  header["seed"] = bundle.seed;
  header["tensors"] = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& t : bundle.tensors) {
    header["tensors"].push_back({{"name", t.name}, {"shape", t.shape}, {"offset", offset}});
    offset += t.element_count();
  }
  const std::string text = header.dump();
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& t : bundle.tensors) {
    for (const auto& z : t.data) {
      put_f64(out, z.real());
      put_f64(out, z.imag());
    }
  }
  if (!out) throw std::runtime_error("bundle: write failed");
}

void write_bundle(const std::filesystem::path& path, const ParamBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("bundle: cannot open " + path.string() + " for writing");
  write_bundle(out, bundle);
}

ParamBundle read_bundle(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError("bundle: bad magic at byte offset 0");
  }
  const std::uint64_t header_len = get_u64(in, 8);
  if (header_len > (1u << 26)) throw ParseError("bundle: implausible header length at offset 8");
  std::string text(header_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) {
    throw ParseError("bundle: truncated JSON header at offset 16");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bundle: malformed JSON header: ") + e.what());
  }
  if (header.value("version", 0) != ParamBundle::kVersion) {
    throw ParseError("bundle: unsupported version");
  }
  ParamBundle bundle;
  bundle.kind = header.at("kind").get<std::string>();
  bundle.seed = header.at("seed").get<std::uint64_t>();
  std::uint64_t offset = 16 + header_len;
  for (const auto& entry : header.at("tensors")) {
    NamedTensor t;
    t.name = entry.at("name").get<std::string>();
    t.shape = entry.at("shape").get<std::vector<std::size_t>>();
    const std::size_t n = t.element_count();
    t.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double re = std::bit_cast<double>(get_u64(in, offset));
      const double im = std::bit_cast<double>(get_u64(in, offset + 8));
      t.data[i] = {re, im};
      offset += 16;
    }
    bundle.tensors.push_back(std::move(t));
  }
  return bundle;
}

ParamBundle read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("bundle: cannot open " + path.string());
  return read_bundle(in);
}

NamedTensor make_tensor(std::string name, const Eigen::MatrixXd& m) {
  NamedTensor t{std::move(name), {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())}, {}};
  t.data.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data.emplace_back(m(r, c), 0.0);
  return t;
}

NamedTensor make_tensor(std::string name, const Eigen::MatrixXcd& m) {
  NamedTensor t{std::move(name), {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())}, {}};
  t.data.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data.push_back(m(r, c));
  return t;
}

NamedTensor make_tensor(std::string name, const Eigen::VectorXd& v) {
  NamedTensor t{std::move(name), {static_cast<std::size_t>(v.size())}, {}};
  for (Eigen::Index i = 0; i < v.size(); ++i) t.data.emplace_back(v(i), 0.0);
  return t;
}

NamedTensor make_scalar(std::string name, double value) {
  return NamedTensor{std::move(name), {1}, {{value, 0.0}}};
}

Eigen::MatrixXcd to_complex_matrix(const NamedTensor& t) {
  if (t.shape.size() != 2) throw ParseError("bundle: tensor '" + t.name + "' is not a matrix");
  Eigen::MatrixXcd m(t.shape[0], t.shape[1]);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.data[i++];
  return m;
}

Eigen::MatrixXd to_real_matrix(const NamedTensor& t) { return to_complex_matrix(t).real(); }

Eigen::VectorXd to_real_vector(const NamedTensor& t) {
  if (t.shape.size() != 1) throw ParseError("bundle: tensor '" + t.name + "' is not a vector");
  Eigen::VectorXd v(t.shape[0]);
  for (std::size_t i = 0; i < t.shape[0]; ++i) v(i) = t.data[i].real();
  return v;
}

double to_scalar(const NamedTensor& t) {
  if (t.element_count() != 1) throw ParseError("bundle: tensor '" + t.name + "' is not a scalar");
  return t.data[0].real();
}

}  // namespace tnmpcqep
