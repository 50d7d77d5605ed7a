#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "tnmpcqep/mpc/meter.hpp"
#include "tnmpcqep/mpc/share.hpp"
#include "tnmpcqep/mpc/transport.hpp"
#include "tnmpcqep/ring.hpp"

namespace tnmpcqep::mpc {

using ring::FixedPointCodec;

struct SessionConfig {
  unsigned bits = ring::kDefaultBits;
  SecurityMode mode = SecurityMode::Passive;
  std::uint64_t seed = 0;
};

/// Closed-form passive costs of the primitives, in bits per element.
std::uint64_t share_cost_bits(unsigned k);                  // 6k client->node
std::uint64_t open_cost_bits(unsigned k);                   // 3k reconstruction
std::uint64_t mul_cost_bits(unsigned k);                    // 3k
std::uint64_t truncate_cost_bits(unsigned k);               // 6k
std::uint64_t fixed_mul_cost_bits(unsigned k);              // 9k
std::uint64_t div_cost_bits(unsigned k, unsigned theta);    // 3k(k + 4 theta + 2)

/// Initial reciprocal estimate for b in [0.5, 1): w0 = 2.9142 - 2b.
inline constexpr double kGoldschmidtOffset = 2.9142;

/// A three-party replicated-secret-sharing session over Z_{2^k}.
///
/// The parties run in lockstep: within a round each party computes its
/// outgoing messages from local state (parties visited 0, 1, 2), all messages
/// are handed to the transport, then every party collects its inbox. Outputs
/// and meter values are therefore a deterministic function of the seed.
///
/// Correlated randomness that the parties would derive from pairwise PRG
/// seeds (masks for truncation) comes from `pair_rng_`; offline dealer
/// material (bit-decomposition masks, model weights) comes from
/// `dealer_share`. Neither is metered: they belong to preprocessing.
class Session {
 public:
  explicit Session(SessionConfig config = {}, std::unique_ptr<Transport> transport = nullptr);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  unsigned bits() const { return config_.bits; }
  SecurityMode mode() const { return config_.mode; }
  CostMeter& meter() { return meter_; }
  const CostMeter& meter() const { return meter_; }
  Transport& transport() { return *transport_; }

  // --- input / output -----------------------------------------------------

  /// Client secret-shares `secrets`; each node receives its pair (6k bits per
  /// element, client->node).
  SharedVector share(std::span<const Word> secrets);
  SharedVector share_fixed(std::span<const double> values, const FixedPointCodec& codec);

  /// Plaintext upload of `words` from a client to node 0 (insecure baseline).
  void upload_plain(std::span<const Word> words);

  /// Open to all three parties: each receives its missing component from the
  /// next party (3k bits per element). Throws IntegrityError when the received
  /// component disagrees with the copy held by the sender's neighbour.
  std::vector<Word> reconstruct(const SharedVector& x);
  std::vector<double> reconstruct_fixed(const SharedVector& x, const FixedPointCodec& codec);

  /// Trivial sharing (c, 0, 0) of public values. Free.
  SharedVector public_constant(std::span<const Word> values) const;
  SharedVector public_constant(Word value, std::size_t count) const;

  /// Dealer-provided sharing, unmetered preprocessing.
  SharedVector dealer_share(std::span<const Word> secrets);

  // --- local operations (0 bits) -----------------------------------------

  SharedVector secure_add(const SharedVector& x, const SharedVector& y) const;
  SharedVector secure_sub(const SharedVector& x, const SharedVector& y) const;
  SharedVector add_constant(const SharedVector& x, std::span<const Word> c) const;
  SharedVector add_constant(const SharedVector& x, Word c) const;
  SharedVector mul_constant(const SharedVector& x, std::span<const Word> c) const;
  SharedVector mul_constant(const SharedVector& x, Word c) const;

  // --- interactive operations ---------------------------------------------

  /// z_i = x_i y_i + x_{i+1} y_i + x_i y_{i+1}, sent to party i-1 (3k bits).
  SharedVector secure_mul(const SharedVector& x, const SharedVector& y);

  /// Divide by 2^shift, result within one unit of floor(x / 2^shift).
  /// Requires |x| < 2^(k-2) (signed) and 1 <= shift <= k-3. Meters 6k bits.
  SharedVector truncate(const SharedVector& x, unsigned shift);
  SharedVector truncate(const SharedVector& x, const FixedPointCodec& codec);

  /// secure_mul followed by truncation by F (9k bits).
  SharedVector fixed_mul(const SharedVector& x, const SharedVector& y, const FixedPointCodec& codec);

  /// Goldschmidt division num / den for fixed-point operands. The decoded
  /// denominator must be positive with bit width at most k-2. Metered as
  /// 3k(k + 4 theta + 2) bits per element regardless of operand values.
  /// Throws DomainError on a non-positive or oversized denominator.
  SharedVector secure_div(const SharedVector& num, const SharedVector& den,
                          const FixedPointCodec& codec, unsigned theta);

 private:
  void require_compatible(const SharedVector& x, const SharedVector& y) const;
  SharedVector truncate_each(const SharedVector& x, std::span<const unsigned> shifts);
  /// Open `x` to every party with each missing component sent by both of its
  /// holders (6k bits), checking the two copies agree.
  std::vector<Word> open_checked(const SharedVector& x, Opcode op);
  /// Bit width (index of the highest set bit + 1) of each secret, revealed.
  std::vector<unsigned> reveal_bit_width(const SharedVector& x);

  SessionConfig config_;
  CostMeter meter_;
  std::unique_ptr<Transport> transport_;
  std::mt19937_64 client_rng_;
  std::mt19937_64 pair_rng_;
  std::mt19937_64 dealer_rng_;
};

}  // namespace tnmpcqep::mpc
