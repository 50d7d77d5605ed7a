#include <doctest.h>

#include <cmath>
#include <random>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/ring.hpp"

using namespace tnmpcqep;
using namespace tnmpcqep::ring;

TEST_CASE("ring_add examples") {
  CHECK(ring_add(RingValue(3), RingValue(4)) == RingValue(7));
  CHECK(ring_add(RingValue(Word{1} << 63), RingValue(Word{1} << 63)) == RingValue(0));
  CHECK(ring_add(RingValue(12345), RingValue(0)) == RingValue(12345));
}

TEST_CASE("ring_mul examples") {
  CHECK(ring_mul(RingValue(3), RingValue(4)) == RingValue(12));
  CHECK(ring_mul(RingValue(Word{1} << 32), RingValue(Word{1} << 32)) == RingValue(0));
  CHECK(ring_mul(RingValue(987654321), RingValue(1)) == RingValue(987654321));
}

TEST_CASE("mismatched widths are rejected") {
  CHECK_THROWS_AS(ring_add(RingValue(1, 32), RingValue(1, 64)), UsageError);
  CHECK_THROWS_AS(ring_mul(RingValue(1, 32), RingValue(1, 64)), UsageError);
  CHECK_THROWS_AS(RingValue(1, 0), UsageError);
  CHECK_THROWS_AS(RingValue(1, 65), UsageError);
}

TEST_CASE("add and mul agree with 128-bit integer arithmetic") {
  std::mt19937_64 rng(11);
  for (unsigned k : {13u, 32u, 63u, 64u}) {
    const unsigned __int128 modulus = static_cast<unsigned __int128>(1) << k;
    for (int i = 0; i < 10000; ++i) {
      const Word a = wrap(rng(), k), b = wrap(rng(), k);
      const auto sum = static_cast<Word>((static_cast<unsigned __int128>(a) + b) % modulus);
      const auto prod = static_cast<Word>((static_cast<unsigned __int128>(a) * b) % modulus);
      REQUIRE(ring_add(RingValue(a, k), RingValue(b, k)).value() == sum);
      REQUIRE(ring_mul(RingValue(a, k), RingValue(b, k)).value() == prod);
      REQUIRE(ring_sub(RingValue(sum, k), RingValue(b, k)).value() == a);
    }
  }
}

TEST_CASE("two's complement interpretation") {
  CHECK(RingValue(~Word{0}).as_signed() == -1);
  CHECK(RingValue(Word{1} << 63).as_signed() == INT64_MIN);
  CHECK(RingValue(255, 8).as_signed() == -1);
  CHECK(RingValue(127, 8).as_signed() == 127);
  CHECK(ring_neg(RingValue(5)).as_signed() == -5);
}

TEST_CASE("fixed-point examples") {
  const FixedPointCodec f16(64, 16), f2(64, 2);
  CHECK(encode_fixed(1.5, f16).value() == 98304);
  CHECK(encode_fixed(0.0, f16).value() == 0);
  CHECK(encode_fixed(-0.25, f2).value() == ~Word{0});
  CHECK(decode_fixed(RingValue(98304), f16) == 1.5);
  CHECK(decode_fixed(RingValue(0), f16) == 0.0);
  CHECK(decode_fixed(RingValue(~Word{0}), f2) == -0.25);
}

TEST_CASE("ties round away from zero") {
  const FixedPointCodec f(64, 1);
  CHECK(encode_fixed(0.25, f).as_signed() == 1);
  CHECK(encode_fixed(-0.25, f).as_signed() == -1);
  CHECK(encode_fixed(0.75, f).as_signed() == 2);
  CHECK(encode_fixed(-0.75, f).as_signed() == -2);
}

TEST_CASE("range errors") {
  const FixedPointCodec f(64, 20);
  CHECK(f.magnitude_bound() == std::ldexp(1.0, 43));
  CHECK_THROWS_AS(encode_fixed(std::ldexp(1.0, 43), f), RangeError);
  CHECK_THROWS_AS(encode_fixed(-std::ldexp(1.0, 43), f), RangeError);
  CHECK_THROWS_AS(encode_fixed(NAN, f), RangeError);
  CHECK_NOTHROW(encode_fixed(std::ldexp(1.0, 42), f));
  CHECK_THROWS_AS(FixedPointCodec(64, 0), UsageError);
  CHECK_THROWS_AS(FixedPointCodec(16, 16), UsageError);
}

TEST_CASE("round trip within half an ulp and monotone encoding") {
  std::mt19937_64 rng(12);
  for (unsigned k : {32u, 64u}) {
    const FixedPointCodec f(k, k == 32 ? 12 : 20);
    std::uniform_real_distribution<double> u(-f.magnitude_bound() * 0.999, f.magnitude_bound() * 0.999);
    double prev_v = -f.magnitude_bound() * 0.999;
    std::vector<double> vs(10000);
    for (auto& v : vs) v = u(rng);
    std::sort(vs.begin(), vs.end());
    std::int64_t prev = encode_fixed(prev_v, f).as_signed();
    for (double v : vs) {
      const RingValue r = encode_fixed(v, f);
      REQUIRE(std::abs(decode_fixed(r, f) - v) <= std::ldexp(1.0, -static_cast<int>(f.fraction_bits()) - 1));
      REQUIRE(r.as_signed() >= prev);
      prev = r.as_signed();
    }
  }
}

TEST_CASE("encode inverts decode for in-range ring values") {
  std::mt19937_64 rng(13);
  const FixedPointCodec f(64, 20);
  for (int i = 0; i < 10000; ++i) {
    // Signed values well inside the representable magnitude.
    const auto s = static_cast<std::int64_t>(rng() >> 2) - (std::int64_t{1} << 61);
    const Word w = from_signed(s >> 12, 64);
    REQUIRE(encode_fixed_word(decode_fixed_word(w, f), f) == w);
  }
}
