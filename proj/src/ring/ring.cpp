#include "tnmpcqep/ring.hpp"

#include <cmath>
#include <string>

#include "tnmpcqep/common/errors.hpp"

namespace tnmpcqep::ring {
namespace {

void require_same_width(const RingValue& a, const RingValue& b) {
  if (a.bits() != b.bits()) {
    throw UsageError("ring width mismatch: " + std::to_string(a.bits()) + " vs " +
                     std::to_string(b.bits()));
  }
}

}  // namespace

RingValue::RingValue(Word value, unsigned bits) : value_(0), bits_(bits) {
  if (bits == 0 || bits > 64) throw UsageError("ring width must be in [1, 64]");
  value_ = wrap(value, bits);
}

RingValue ring_add(RingValue a, RingValue b) {
  require_same_width(a, b);
  return RingValue(a.value() + b.value(), a.bits());
}

RingValue ring_sub(RingValue a, RingValue b) {
  require_same_width(a, b);
  return RingValue(a.value() - b.value(), a.bits());
}

RingValue ring_mul(RingValue a, RingValue b) {
  require_same_width(a, b);
  return RingValue(a.value() * b.value(), a.bits());
}

RingValue ring_neg(RingValue a) { return RingValue(Word{0} - a.value(), a.bits()); }

FixedPointCodec::FixedPointCodec(unsigned k, unsigned fraction_bits) : k_(k), f_(fraction_bits) {
  if (k == 0 || k > 64) throw UsageError("fixed-point codec: k must be in [1, 64]");
  if (fraction_bits == 0 || fraction_bits >= k) {
    throw UsageError("fixed-point codec: need 0 < F < k");
  }
  scale_ = std::ldexp(1.0, static_cast<int>(f_));
}

double FixedPointCodec::magnitude_bound() const {
  return std::ldexp(1.0, static_cast<int>(k_) - 1 - static_cast<int>(f_));
}

Word encode_fixed_word(double v, const FixedPointCodec& codec) {
  if (!std::isfinite(v)) throw RangeError("encode_fixed: value is not finite");
  if (std::fabs(v) >= codec.magnitude_bound()) {
    throw RangeError("encode_fixed: |" + std::to_string(v) + "| exceeds 2^(k-1-F)");
  }
  // std::round rounds half away from zero.
  const double scaled = std::round(v * codec.scale());
  const double limit = std::ldexp(1.0, static_cast<int>(codec.k()) - 1);
  if (std::fabs(scaled) >= limit) throw RangeError("encode_fixed: rounded value out of range");
  return from_signed(static_cast<std::int64_t>(scaled), codec.k());
}

RingValue encode_fixed(double v, const FixedPointCodec& codec) {
  return RingValue(encode_fixed_word(v, codec), codec.k());
}

double decode_fixed_word(Word w, const FixedPointCodec& codec) {
  return static_cast<double>(to_signed(wrap(w, codec.k()), codec.k())) / codec.scale();
}

double decode_fixed(RingValue r, const FixedPointCodec& codec) {
  if (r.bits() != codec.k()) throw UsageError("decode_fixed: ring width does not match codec");
  return decode_fixed_word(r.value(), codec);
}

}  // namespace tnmpcqep::ring
