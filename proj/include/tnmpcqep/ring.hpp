#pragma once

#include <cstdint>
#include <compare>

namespace tnmpcqep::ring {

using Word = std::uint64_t;

constexpr unsigned kDefaultBits = 64;

/// Mask selecting the low `bits` bits (bits in [1, 64]).
constexpr Word mask_for(unsigned bits) {
  return bits >= 64 ? ~Word{0} : ((Word{1} << bits) - 1);
}

/// Reduce a raw word into Z_{2^bits}.
constexpr Word wrap(Word w, unsigned bits) { return w & mask_for(bits); }

/// Two's-complement interpretation of a reduced ring word.
constexpr std::int64_t to_signed(Word w, unsigned bits) {
  if (bits >= 64) return static_cast<std::int64_t>(w);
  const Word sign = Word{1} << (bits - 1);
  return static_cast<std::int64_t>((w ^ sign)) - static_cast<std::int64_t>(sign);
}

/// Inverse of to_signed (reduces modulo 2^bits).
constexpr Word from_signed(std::int64_t v, unsigned bits) {
  return wrap(static_cast<Word>(v), bits);
}

/// An element of Z_{2^k}. Arithmetic never traps; it wraps.
class RingValue {
 public:
  constexpr RingValue() = default;
  /// Throws UsageError if bits is outside [1, 64].
  explicit RingValue(Word value, unsigned bits = kDefaultBits);

  constexpr Word value() const { return value_; }
  constexpr unsigned bits() const { return bits_; }
  constexpr std::int64_t as_signed() const { return to_signed(value_, bits_); }

  friend constexpr bool operator==(const RingValue&, const RingValue&) = default;

 private:
  Word value_ = 0;
  unsigned bits_ = kDefaultBits;
};

RingValue ring_add(RingValue a, RingValue b);
RingValue ring_sub(RingValue a, RingValue b);
RingValue ring_mul(RingValue a, RingValue b);
RingValue ring_neg(RingValue a);

/// Real <-> Z_{2^k} fixed-point encoding with `fraction_bits` fractional bits.
class FixedPointCodec {
 public:
  /// Requires 1 <= k <= 64 and 0 < fraction_bits < k.
  FixedPointCodec(unsigned k = kDefaultBits, unsigned fraction_bits = 20);

  unsigned k() const { return k_; }
  unsigned fraction_bits() const { return f_; }
  double scale() const { return scale_; }
  /// Largest representable magnitude (exclusive): 2^(k-1-F).
  double magnitude_bound() const;
  /// One unit in the last place, 2^-F.
  double ulp() const { return 1.0 / scale_; }

  friend bool operator==(const FixedPointCodec& a, const FixedPointCodec& b) {
    return a.k_ == b.k_ && a.f_ == b.f_;
  }

 private:
  unsigned k_;
  unsigned f_;
  double scale_;
};

/// round(v * 2^F), ties away from zero, in two's complement.
/// Throws RangeError when |v| >= 2^(k-1-F) or v is not finite.
RingValue encode_fixed(double v, const FixedPointCodec& codec);
Word encode_fixed_word(double v, const FixedPointCodec& codec);

/// Signed interpretation divided by 2^F.
double decode_fixed(RingValue r, const FixedPointCodec& codec);
double decode_fixed_word(Word w, const FixedPointCodec& codec);

}  // namespace tnmpcqep::ring
