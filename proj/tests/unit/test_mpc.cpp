#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <cmath>
#include <random>

#include "program_oracle.hpp"
#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/mpc/program.hpp"
#include "tnmpcqep/mpc/session.hpp"
#include "tnmpcqep/mpc/wire.hpp"

using namespace tnmpcqep;
using namespace tnmpcqep::mpc;
using ring::FixedPointCodec;
using ring::RingValue;
using ring::Word;

namespace {

std::vector<Word> words(std::initializer_list<Word> w) { return w; }

struct Delta {
  CostReport before;
  const Session& s;
  explicit Delta(const Session& session) : before(session.meter().report()), s(session) {}
  CostReport get() const {
    const CostReport& now = s.meter().report();
    return {now.client_to_node_bits - before.client_to_node_bits, now.node_to_node_bits - before.node_to_node_bits,
            now.reconstruction_bits - before.reconstruction_bits};
  }
};

}  // namespace

TEST_CASE("share with forced randomness") {
  const auto t = share_with_randomness(RingValue(7), RingValue(3), RingValue(5));
  CHECK(t[0].first.value() == 3);
  CHECK(t[0].second.value() == 5);
  CHECK(t[1].first.value() == 5);
  CHECK(t[1].second.value() == ~Word{0});
  CHECK(t[2].first.value() == ~Word{0});
  CHECK(t[2].second.value() == 3);
  CHECK(reconstruct(t).value() == 7);
}

TEST_CASE("reconstruct examples and tampering") {
  std::mt19937_64 rng(1);
  CHECK(reconstruct(share(RingValue(0), rng)).value() == 0);
  CHECK(reconstruct(share(RingValue(42), rng)).value() == 42);
  auto t = share(RingValue(42), rng);
  t[1].first = ring_add(t[1].first, RingValue(1));
  CHECK_THROWS_AS(reconstruct(t), IntegrityError);

  Session s({64, SecurityMode::Passive, 3});
  auto x = s.share(words({42}));
  x.second(2)[0] ^= 1;
  CHECK_THROWS_AS(s.reconstruct(x), IntegrityError);
}

TEST_CASE("sharing and opening costs") {
  for (unsigned k : {32u, 64u}) {
    Session s({k, SecurityMode::Passive, 1});
    Delta d(s);
    const auto x = s.share(words({9}));
    CHECK(d.get().client_to_node_bits == 6 * k);
    CHECK(d.get().node_to_node_bits == 0);
    Delta o(s);
    CHECK(s.reconstruct(x) == words({9}));
    CHECK(o.get().reconstruction_bits == 3 * k);
    CHECK(o.get().total() == 3 * k);
  }
  Session s({64, SecurityMode::Passive, 1});
  Delta d(s);
  s.share(words({0}));
  CHECK(d.get().client_to_node_bits == 384);
}

TEST_CASE("linear operations are free") {
  Session s({64, SecurityMode::Passive, 2});
  const auto x = s.share(words({3})), y = s.share(words({4})), z = s.share(words({0}));
  Delta d(s);
  const auto sum = s.secure_add(x, y);
  const auto same = s.secure_add(x, z);
  const auto scaled = s.mul_constant(x, 5);
  const auto shifted = s.add_constant(x, 10);
  CHECK(d.get().total() == 0);
  CHECK(s.reconstruct(sum) == words({7}));
  CHECK(s.reconstruct(same) == words({3}));
  CHECK(s.reconstruct(scaled) == words({15}));
  CHECK(s.reconstruct(shifted) == words({13}));
}

TEST_CASE("secure multiplication") {
  Session s({64, SecurityMode::Passive, 4});
  const auto x = s.share(words({3, 5})), y = s.share(words({4, 0}));
  Delta d(s);
  const auto p = s.secure_mul(x, y);
  CHECK(d.get().node_to_node_bits == 2 * 192);
  CHECK(d.get().client_to_node_bits == 0);
  CHECK(s.reconstruct(p) == words({12, 0}));
}

TEST_CASE("truncation and fixed-point multiplication") {
  const FixedPointCodec c(64, 20);
  const double tol = 2 * c.ulp();
  Session s({64, SecurityMode::Passive, 5});
  const auto a = s.share_fixed(std::vector<double>{1.5, 0.0, -3.25}, c);
  const auto b = s.share_fixed(std::vector<double>{2.0, 7.0, 1.0}, c);
  const auto prod = s.secure_mul(a, b);
  Delta d(s);
  const auto t = s.truncate(prod, c);
  CHECK(d.get().node_to_node_bits == 3 * 384);
  const auto tv = s.reconstruct_fixed(t, c);
  CHECK(std::abs(tv[0] - 3.0) <= tol);
  CHECK(std::abs(tv[1] - 0.0) <= tol);
  CHECK(std::abs(tv[2] + 3.25) <= tol);

  Delta f(s);
  const auto fm = s.reconstruct_fixed(s.fixed_mul(a, b, c), c);
  CHECK(f.get().node_to_node_bits == 3 * 576);
  CHECK(std::abs(fm[0] - 3.0) <= tol);
  CHECK(std::abs(fm[2] + 3.25) <= tol);

  // Truncating an exact zero sharing.
  const auto zero = s.reconstruct_fixed(s.truncate(s.share(words({0})), c), c);
  CHECK(std::abs(zero[0]) <= tol);
}

TEST_CASE("meter exactness for k in {32, 64}") {
  for (unsigned k : {32u, 64u}) {
    const FixedPointCodec c(k, k == 32 ? 10 : 20);
    Session s({k, SecurityMode::Passive, 6});
    const auto x = s.share_fixed(std::vector<double>{1.25}, c);
    const auto y = s.share_fixed(std::vector<double>{2.5}, c);
    Delta m(s);
    s.secure_mul(x, y);
    CHECK(m.get().node_to_node_bits == mul_cost_bits(k));
    CHECK(mul_cost_bits(k) == 3 * k);
    Delta t(s);
    s.truncate(s.secure_mul(x, y), c);
    CHECK(t.get().node_to_node_bits == mul_cost_bits(k) + truncate_cost_bits(k));
    CHECK(truncate_cost_bits(k) == 6 * k);
    Delta f(s);
    s.fixed_mul(x, y, c);
    CHECK(f.get().node_to_node_bits == 9 * k);
    for (unsigned theta : {1u, 5u}) {
      Delta v(s);
      s.secure_div(x, y, c, theta);
      CHECK(v.get().node_to_node_bits == 3ull * k * (k + 4 * theta + 2));
      CHECK(v.get().reconstruction_bits == 0);
      CHECK(v.get().client_to_node_bits == 0);
    }
  }
  CHECK(div_cost_bits(64, 5) == 16512);
}

TEST_CASE("division") {
  const FixedPointCodec c(64, 20);
  Session s({64, SecurityMode::Passive, 7});
  const auto q = s.reconstruct_fixed(
      s.secure_div(s.share_fixed(std::vector<double>{6.0, 3.7, -2.0}, c),
                   s.share_fixed(std::vector<double>{2.0, 1.0, 0.125}, c), c, 5),
      c);
  const double rel = std::exp2(-10);
  CHECK(std::abs(q[0] - 3.0) <= rel * 3.0);
  CHECK(std::abs(q[1] - 3.7) <= rel * 3.7);
  CHECK(std::abs(q[2] + 16.0) <= rel * 16.0);

  CHECK_THROWS_AS(s.secure_div(s.share_fixed(std::vector<double>{1.0}, c), s.share_fixed(std::vector<double>{0.0}, c), c, 5),
                  DomainError);
  CHECK_THROWS_AS(s.secure_div(s.share_fixed(std::vector<double>{1.0}, c), s.share_fixed(std::vector<double>{-2.0}, c), c, 5),
                  DomainError);
}

TEST_CASE("division accuracy over the denominator range") {
  const FixedPointCodec c(64, 20);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> e(-6.0, 6.0), n(-50.0, 50.0);
  std::vector<double> nums, dens;
  for (int i = 0; i < 500; ++i) {
    nums.push_back(n(rng));
    dens.push_back(std::exp2(e(rng)));
  }
  nums.push_back(1.0);
  dens.push_back(std::exp2(-6));
  nums.push_back(1.0);
  dens.push_back(std::exp2(6));
  Session s({64, SecurityMode::Passive, 9});
  const auto q = s.reconstruct_fixed(s.secure_div(s.share_fixed(nums, c), s.share_fixed(dens, c), c, 5), c);
  for (std::size_t i = 0; i < nums.size(); ++i) {
    const double exact = nums[i] / dens[i];
    // Relative to the quotient, with one ulp of absolute slack for tiny quotients.
    REQUIRE(std::abs(q[i] - exact) <= std::exp2(-10) * std::abs(exact) + c.ulp());
  }
}

TEST_CASE("run_protocol examples") {
  ProtocolConfig cfg;
  const auto empty = run_protocol({}, cfg);
  CHECK(empty.cost.total() == 0);
  CHECK(empty.opened.empty());

  Program p{{1.5, 2.0}, {Instruction::fixed_mul(0, 1), Instruction::open(2)}};
  const auto passive = run_protocol(p, cfg);
  CHECK(passive.cost.node_to_node_bits == 576);
  cfg.mode = SecurityMode::Active;
  const auto active = run_protocol(p, cfg);
  CHECK(active.cost.node_to_node_bits == 1152);
  CHECK(active.decoded == passive.decoded);

  CHECK_THROWS_AS(run_protocol({{1.0}, {Instruction::add(0, 3)}}, {}), UsageError);
  CHECK_THROWS_AS(run_protocol({{1.0}, {Instruction::open(1)}}, {}), UsageError);
}

TEST_CASE("random programs match the plaintext oracle") {
  std::mt19937_64 rng(10);
  int total_truncations = 0;
  for (int t = 0; t < 300; ++t) {
    const auto g = oracle::random_program(rng, 20);
    ProtocolConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto res = run_protocol(g.program, cfg);
    REQUIRE(res.decoded.size() == g.outputs.size());
    for (std::size_t i = 0; i < g.outputs.size(); ++i) {
      const long double err = std::abs(static_cast<long double>(res.decoded[i]) - g.outputs[i].value);
      REQUIRE(err <= g.outputs[i].tolerance + 1e-12L);
    }
    cfg.mode = SecurityMode::Active;
    const auto act = run_protocol(g.program, cfg);
    CHECK(act.cost.client_to_node_bits == 2 * res.cost.client_to_node_bits);
    CHECK(act.cost.node_to_node_bits == 2 * res.cost.node_to_node_bits);
    CHECK(act.cost.reconstruction_bits == 2 * res.cost.reconstruction_bits);
    total_truncations += g.truncations;
  }
  CHECK(total_truncations > 100);
}

TEST_CASE("protocol runs are deterministic per seed") {
  std::mt19937_64 rng(11);
  const auto g = oracle::random_program(rng, 20);
  ProtocolConfig cfg;
  cfg.seed = 99;
  const auto a = run_protocol(g.program, cfg);
  const auto b = run_protocol(g.program, cfg);
  CHECK(a.opened == b.opened);
  CHECK(a.cost.total() == b.cost.total());
}

TEST_CASE("socket transport gives the same outputs and costs") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_program(rng, 20);
    ProtocolConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto local = run_protocol(g.program, cfg, make_local_transport());
    const auto sock = run_protocol(g.program, cfg, make_socket_transport());
    REQUIRE(local.opened == sock.opened);
    REQUIRE(local.cost.total() == sock.cost.total());
    REQUIRE(local.wire.total() == sock.wire.total());
  }
}

TEST_CASE("wire frames round trip") {
  for (unsigned k : {13u, 32u, 64u}) {
    Frame f{Opcode::Reshare, 1, 2, {0, 1, ring::mask_for(k), 12345 & ring::mask_for(k)}};
    const auto bytes = encode_frame(f, k);
    CHECK(bytes.size() == kFrameHeaderBytes + 4 * element_bytes(k));
    const auto back = decode_frame(bytes, k);
    REQUIRE(back.has_value());
    CHECK(back->frame == f);
    CHECK(back->consumed == bytes.size());
    CHECK_FALSE(decode_frame(std::span(bytes).first(bytes.size() - 1), k).has_value());
  }
  // Big-endian length prefix.
  const auto bytes = encode_frame({Opcode::Open, 0, 1, {7}}, 64);
  CHECK(bytes[0] == 0);
  CHECK(bytes[3] == 8);
  CHECK(bytes[4] == static_cast<std::uint8_t>(Opcode::Open));
}

TEST_CASE("a single party's view does not depend on the secret") {
  // Chi-square homogeneity test on the top nibble of each component a party
  // holds, for two different secrets.
  constexpr int kRuns = 20000, kBins = 16;
  std::mt19937_64 rng(13);
  for (int party = 0; party < 3; ++party) {
    for (int component = 0; component < 2; ++component) {
      std::array<std::array<double, kBins>, 2> hist{};
      for (int secret = 0; secret < 2; ++secret) {
        const RingValue v(secret == 0 ? 0 : 0xdeadbeefcafef00dULL);
        for (int r = 0; r < kRuns; ++r) {
          const auto t = share(v, rng);
          const Word w = (component == 0 ? t[party].first : t[party].second).value();
          hist[secret][w >> 60] += 1;
        }
      }
      double chi2 = 0;
      for (int b = 0; b < kBins; ++b) {
        const double total = hist[0][b] + hist[1][b];
        for (int s = 0; s < 2; ++s) {
          const double expected = total / 2;
          chi2 += (hist[s][b] - expected) * (hist[s][b] - expected) / expected;
        }
      }
      const boost::math::chi_squared dist(kBins - 1);
      const double p = 1 - boost::math::cdf(dist, chi2);
      CHECK(p > 0.01);
    }
  }
}

TEST_CASE("meter counters are monotone") {
  Session s({64, SecurityMode::Passive, 14});
  const FixedPointCodec c(64, 20);
  const auto x = s.share_fixed(std::vector<double>{1.0, 2.0}, c);
  std::uint64_t prev = 0;
  for (int i = 0; i < 5; ++i) {
    s.fixed_mul(x, x, c);
    const auto now = s.meter().report().total();
    CHECK(now > prev);
    prev = now;
  }
}
