#include "tnmpcqep/mpc/share.hpp"

#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::mpc {

Word uniform_word(std::mt19937_64& rng, unsigned bits) { return ring::wrap(rng(), bits); }

ShareTriple share_with_randomness(RingValue v, RingValue v0, RingValue v1) {
  const RingValue v2 = ring::ring_sub(ring::ring_sub(v, v0), v1);
  const std::array<RingValue, kParties> c{v0, v1, v2};
  ShareTriple out;
  for (int i = 0; i < kParties; ++i) out[i] = {i, c[i], c[next_party(i)]};
  return out;
}

ShareTriple share(RingValue v, std::mt19937_64& rng) {
  const RingValue v0(uniform_word(rng, v.bits()), v.bits());
  const RingValue v1(uniform_word(rng, v.bits()), v.bits());
  return share_with_randomness(v, v0, v1);
}

RingValue reconstruct(const ShareTriple& shares) {
  for (int i = 0; i < kParties; ++i) {
    if (shares[i].party != i) throw UsageError("reconstruct: shares out of party order");
    if (shares[i].second != shares[next_party(i)].first) {
      throw IntegrityError("reconstruct: component " + std::to_string(next_party(i)) +
                           " differs between party " + std::to_string(i) + " and party " +
                           std::to_string(next_party(i)));
    }
  }
  return ring::ring_add(ring::ring_add(shares[0].first, shares[1].first), shares[2].first);
}

SharedVector::SharedVector(unsigned bits, std::size_t size) : bits_(bits), size_(size) {
  if (bits == 0 || bits > 64) throw UsageError("SharedVector: ring width must be in [1, 64]");
  for (int p = 0; p < kParties; ++p) {
    first_[p].assign(size, 0);
    second_[p].assign(size, 0);
  }
}

SharedVector SharedVector::from_components(unsigned bits,
                                           const std::array<std::vector<Word>, kParties>& c) {
  const std::size_t n = c[0].size();
  if (c[1].size() != n || c[2].size() != n) {
    throw UsageError("SharedVector: component vectors differ in length");
  }
  SharedVector out(bits, n);
  for (int p = 0; p < kParties; ++p) {
    for (std::size_t j = 0; j < n; ++j) {
      out.first_[p][j] = ring::wrap(c[p][j], bits);
      out.second_[p][j] = ring::wrap(c[next_party(p)][j], bits);
    }
  }
  return out;
}

ReplicatedShare SharedVector::at(int party, std::size_t index) const {
  return {party, RingValue(first_[party].at(index), bits_), RingValue(second_[party].at(index), bits_)};
}

ShareTriple SharedVector::triple(std::size_t index) const {
  return {at(0, index), at(1, index), at(2, index)};
}

SharedVector SharedVector::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > size_) throw UsageError("SharedVector::slice out of range");
  SharedVector out(bits_, count);
  for (int p = 0; p < kParties; ++p) {
    std::copy_n(first_[p].begin() + offset, count, out.first_[p].begin());
    std::copy_n(second_[p].begin() + offset, count, out.second_[p].begin());
  }
  return out;
}

SharedVector SharedVector::gather(std::span<const std::size_t> index) const {
  SharedVector out(bits_, index.size());
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] >= size_) throw UsageError("SharedVector::gather index out of range");
    for (int p = 0; p < kParties; ++p) {
      out.first_[p][j] = first_[p][index[j]];
      out.second_[p][j] = second_[p][index[j]];
    }
  }
  return out;
}

SharedVector SharedVector::concat(const SharedVector& other) const {
  if (other.bits_ != bits_) throw UsageError("SharedVector::concat ring width mismatch");
  SharedVector out(bits_, size_ + other.size_);
  for (int p = 0; p < kParties; ++p) {
    std::copy(first_[p].begin(), first_[p].end(), out.first_[p].begin());
    std::copy(other.first_[p].begin(), other.first_[p].end(), out.first_[p].begin() + size_);
    std::copy(second_[p].begin(), second_[p].end(), out.second_[p].begin());
    std::copy(other.second_[p].begin(), other.second_[p].end(), out.second_[p].begin() + size_);
  }
  return out;
}

}  // namespace tnmpcqep::mpc
