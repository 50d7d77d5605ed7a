#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tnmpcqep/ring.hpp"

namespace tnmpcqep::mpc {

using ring::RingValue;
using ring::Word;

constexpr int kParties = 3;

constexpr int next_party(int i) { return (i + 1) % kParties; }
constexpr int prev_party(int i) { return (i + kParties - 1) % kParties; }

/// Party i's view of a replicated secret: (v_i, v_{i+1 mod 3}).
struct ReplicatedShare {
  int party = 0;
  RingValue first;
  RingValue second;

  friend bool operator==(const ReplicatedShare&, const ReplicatedShare&) = default;
};

using ShareTriple = std::array<ReplicatedShare, kParties>;

/// Sharing with caller-chosen components v0, v1; v2 = v - v0 - v1.
ShareTriple share_with_randomness(RingValue v, RingValue v0, RingValue v1);

/// v0, v1 drawn uniformly from Z_{2^k}.
ShareTriple share(RingValue v, std::mt19937_64& rng);

/// v0 + v1 + v2. Throws IntegrityError when overlapping components differ.
RingValue reconstruct(const ShareTriple& shares);

/// Draw a uniform element of Z_{2^bits}.
Word uniform_word(std::mt19937_64& rng, unsigned bits);

/// A vector of secrets held in replicated form by the three parties.
/// Party i stores first = v_i and second = v_{i+1}.
class SharedVector {
 public:
  SharedVector() = default;
  SharedVector(unsigned bits, std::size_t size);

  /// Build from the additive components (v_0, v_1, v_2).
  static SharedVector from_components(unsigned bits,
                                      const std::array<std::vector<Word>, kParties>& components);

  unsigned bits() const { return bits_; }
  std::size_t size() const { return size_; }

  std::vector<Word>& first(int party) { return first_[party]; }
  std::vector<Word>& second(int party) { return second_[party]; }
  const std::vector<Word>& first(int party) const { return first_[party]; }
  const std::vector<Word>& second(int party) const { return second_[party]; }

  ReplicatedShare at(int party, std::size_t index) const;
  ShareTriple triple(std::size_t index) const;

  SharedVector slice(std::size_t offset, std::size_t count) const;
  /// Element i of the result is element index[i] of this vector.
  SharedVector gather(std::span<const std::size_t> index) const;
  /// [this; other]
  SharedVector concat(const SharedVector& other) const;

 private:
  unsigned bits_ = ring::kDefaultBits;
  std::size_t size_ = 0;
  std::array<std::vector<Word>, kParties> first_;
  std::array<std::vector<Word>, kParties> second_;
};

}  // namespace tnmpcqep::mpc
