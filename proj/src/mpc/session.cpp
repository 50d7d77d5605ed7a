#include "tnmpcqep/mpc/session.hpp"

#include <algorithm>
#include <string>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"

namespace tnmpcqep::mpc {
namespace {

using ring::wrap;

constexpr auto node(int p) { return static_cast<std::uint8_t>(p); }

Word pow2(unsigned e) { return Word{1} << e; }

// Uniform draw from [0, 2^bits) for bits in [0, 64].
Word bounded_word(std::mt19937_64& rng, unsigned bits) {
  if (bits == 0) return 0;
  return bits >= 64 ? rng() : (rng() & (pow2(bits) - 1));
}

}  // namespace

std::uint64_t share_cost_bits(unsigned k) { return 6ULL * k; }
std::uint64_t open_cost_bits(unsigned k) { return 3ULL * k; }
std::uint64_t mul_cost_bits(unsigned k) { return 3ULL * k; }
std::uint64_t truncate_cost_bits(unsigned k) { return 6ULL * k; }
std::uint64_t fixed_mul_cost_bits(unsigned k) { return 9ULL * k; }
std::uint64_t div_cost_bits(unsigned k, unsigned theta) {
  return 3ULL * k * (static_cast<std::uint64_t>(k) + 4ULL * theta + 2ULL);
}

Session::Session(SessionConfig config, std::unique_ptr<Transport> transport)
    : config_(config),
      meter_(config.mode),
      transport_(transport ? std::move(transport) : make_local_transport()),
      client_rng_(derive_seed(config.seed, "mpc.client")),
      pair_rng_(derive_seed(config.seed, "mpc.pairwise")),
      dealer_rng_(derive_seed(config.seed, "mpc.dealer")) {
  if (config.bits < 8 || config.bits > 64) throw UsageError("session: ring width must be in [8, 64]");
  transport_->attach(&meter_, config.bits);
}

void Session::require_compatible(const SharedVector& x, const SharedVector& y) const {
  if (x.bits() != bits() || y.bits() != bits()) throw UsageError("session: ring width mismatch");
  if (x.size() != y.size()) {
    throw UsageError("session: operand lengths differ (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
}

// --- input / output ---------------------------------------------------------

SharedVector Session::share(std::span<const Word> secrets) {
  const std::size_t n = secrets.size();
  std::array<std::vector<Word>, kParties> comp;
  for (auto& c : comp) c.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    comp[0][j] = uniform_word(client_rng_, bits());
    comp[1][j] = uniform_word(client_rng_, bits());
    comp[2][j] = wrap(secrets[j] - comp[0][j] - comp[1][j], bits());
  }
  for (int p = 0; p < kParties; ++p) {
    std::vector<Word> payload(comp[p]);
    payload.insert(payload.end(), comp[next_party(p)].begin(), comp[next_party(p)].end());
    transport_->send(kClientEndpoint, node(p), Opcode::Share, payload);
  }
  SharedVector out(bits(), n);
  for (int p = 0; p < kParties; ++p) {
    auto payload = transport_->receive(kClientEndpoint, node(p), Opcode::Share);
    if (payload.size() != 2 * n) throw ProtocolAbort("share: malformed share message");
    std::copy_n(payload.begin(), n, out.first(p).begin());
    std::copy_n(payload.begin() + static_cast<std::ptrdiff_t>(n), n, out.second(p).begin());
  }
  return out;
}

SharedVector Session::share_fixed(std::span<const double> values, const FixedPointCodec& codec) {
  if (codec.k() != bits()) throw UsageError("share_fixed: codec width does not match session");
  std::vector<Word> words(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) words[j] = ring::encode_fixed_word(values[j], codec);
  return share(words);
}

void Session::upload_plain(std::span<const Word> words) {
  transport_->send(kClientEndpoint, node(0), Opcode::Upload, words);
  (void)transport_->receive(kClientEndpoint, node(0), Opcode::Upload);
}

std::vector<Word> Session::reconstruct(const SharedVector& x) {
  if (x.bits() != bits()) throw UsageError("reconstruct: ring width mismatch");
  const std::size_t n = x.size();
  // Party p lacks component p+2, which party p+1 holds as its second entry.
  for (int p = 0; p < kParties; ++p) {
    transport_->send(node(next_party(p)), node(p), Opcode::Open, x.second(next_party(p)));
  }
  std::array<std::vector<Word>, kParties> value;
  for (int p = 0; p < kParties; ++p) {
    auto missing = transport_->receive(node(next_party(p)), node(p), Opcode::Open);
    if (missing.size() != n) throw ProtocolAbort("reconstruct: malformed open message");
    value[p].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      value[p][j] = wrap(x.first(p)[j] + x.second(p)[j] + missing[j], bits());
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (value[0][j] != value[1][j] || value[1][j] != value[2][j]) {
      throw IntegrityError("reconstruct: parties disagree on opened element " + std::to_string(j) +
                           " (inconsistent replicated components)");
    }
  }
  return value[0];
}

std::vector<double> Session::reconstruct_fixed(const SharedVector& x, const FixedPointCodec& codec) {
  const auto words = reconstruct(x);
  std::vector<double> out(words.size());
  for (std::size_t j = 0; j < words.size(); ++j) out[j] = ring::decode_fixed_word(words[j], codec);
  return out;
}

std::vector<Word> Session::open_checked(const SharedVector& x, Opcode op) {
  const std::size_t n = x.size();
  // Component c = p+2 is held by party p+2 (first) and party p+1 (second).
  for (int p = 0; p < kParties; ++p) {
    const int holder_first = prev_party(p);
    const int holder_second = next_party(p);
    transport_->send(node(holder_first), node(p), op, x.first(holder_first));
    transport_->send(node(holder_second), node(p), op, x.second(holder_second));
  }
  std::vector<Word> opened(n);
  for (int p = 0; p < kParties; ++p) {
    auto a = transport_->receive(node(prev_party(p)), node(p), op);
    auto b = transport_->receive(node(next_party(p)), node(p), op);
    if (a.size() != n || b.size() != n) throw ProtocolAbort("open: malformed message");
    if (a != b) {
      throw IntegrityError("open: party " + std::to_string(p) +
                           " received inconsistent copies of component " +
                           std::to_string(prev_party(p)));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Word v = wrap(x.first(p)[j] + x.second(p)[j] + a[j], bits());
      if (p == 0) {
        opened[j] = v;
      } else if (opened[j] != v) {
        throw IntegrityError("open: parties disagree on element " + std::to_string(j));
      }
    }
  }
  return opened;
}

SharedVector Session::public_constant(std::span<const Word> values) const {
  std::array<std::vector<Word>, kParties> comp;
  comp[0].assign(values.begin(), values.end());
  comp[1].assign(values.size(), 0);
  comp[2].assign(values.size(), 0);
  return SharedVector::from_components(bits(), comp);
}

SharedVector Session::public_constant(Word value, std::size_t count) const {
  return public_constant(std::vector<Word>(count, value));
}

SharedVector Session::dealer_share(std::span<const Word> secrets) {
  std::array<std::vector<Word>, kParties> comp;
  for (auto& c : comp) c.resize(secrets.size());
  for (std::size_t j = 0; j < secrets.size(); ++j) {
    comp[0][j] = uniform_word(dealer_rng_, bits());
    comp[1][j] = uniform_word(dealer_rng_, bits());
    comp[2][j] = wrap(secrets[j] - comp[0][j] - comp[1][j], bits());
  }
  return SharedVector::from_components(bits(), comp);
}

// --- local operations ---------------------------------------------------------

SharedVector Session::secure_add(const SharedVector& x, const SharedVector& y) const {
  require_compatible(x, y);
  SharedVector out(bits(), x.size());
  for (int p = 0; p < kParties; ++p) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      out.first(p)[j] = wrap(x.first(p)[j] + y.first(p)[j], bits());
      out.second(p)[j] = wrap(x.second(p)[j] + y.second(p)[j], bits());
    }
  }
  return out;
}

SharedVector Session::secure_sub(const SharedVector& x, const SharedVector& y) const {
  require_compatible(x, y);
  SharedVector out(bits(), x.size());
  for (int p = 0; p < kParties; ++p) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      out.first(p)[j] = wrap(x.first(p)[j] - y.first(p)[j], bits());
      out.second(p)[j] = wrap(x.second(p)[j] - y.second(p)[j], bits());
    }
  }
  return out;
}

SharedVector Session::add_constant(const SharedVector& x, std::span<const Word> c) const {
  if (c.size() != x.size()) throw UsageError("add_constant: length mismatch");
  SharedVector out = x;
  // Component 0 lives at party 0 (first) and party 2 (second).
  for (std::size_t j = 0; j < x.size(); ++j) {
    out.first(0)[j] = wrap(out.first(0)[j] + c[j], bits());
    out.second(2)[j] = wrap(out.second(2)[j] + c[j], bits());
  }
  return out;
}

SharedVector Session::add_constant(const SharedVector& x, Word c) const {
  return add_constant(x, std::vector<Word>(x.size(), c));
}

SharedVector Session::mul_constant(const SharedVector& x, std::span<const Word> c) const {
  if (c.size() != x.size()) throw UsageError("mul_constant: length mismatch");
  SharedVector out = x;
  for (int p = 0; p < kParties; ++p) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      out.first(p)[j] = wrap(out.first(p)[j] * c[j], bits());
      out.second(p)[j] = wrap(out.second(p)[j] * c[j], bits());
    }
  }
  return out;
}

SharedVector Session::mul_constant(const SharedVector& x, Word c) const {
  return mul_constant(x, std::vector<Word>(x.size(), c));
}

// --- interactive operations -----------------------------------------------------

SharedVector Session::secure_mul(const SharedVector& x, const SharedVector& y) {
  require_compatible(x, y);
  const std::size_t n = x.size();
  std::array<std::vector<Word>, kParties> z;
  for (int p = 0; p < kParties; ++p) {
    z[p].resize(n);
    const auto& x0 = x.first(p);
    const auto& x1 = x.second(p);
    const auto& y0 = y.first(p);
    const auto& y1 = y.second(p);
    for (std::size_t j = 0; j < n; ++j) {
      z[p][j] = wrap(x0[j] * y0[j] + x1[j] * y0[j] + x0[j] * y1[j], bits());
    }
    transport_->send(node(p), node(prev_party(p)), Opcode::Reshare, z[p]);
  }
  SharedVector out(bits(), n);
  for (int p = 0; p < kParties; ++p) {
    auto incoming = transport_->receive(node(next_party(p)), node(p), Opcode::Reshare);
    if (incoming.size() != n) throw ProtocolAbort("secure_mul: malformed reshare message");
    out.first(p) = std::move(z[p]);
    out.second(p) = std::move(incoming);
  }
  return out;
}

SharedVector Session::truncate_each(const SharedVector& x, std::span<const unsigned> shifts) {
  const unsigned k = bits();
  const std::size_t n = x.size();
  if (shifts.size() != n) throw UsageError("truncate: shift vector length mismatch");
  for (unsigned m : shifts) {
    if (m > k - 3) throw UsageError("truncate: shift must be at most k-3");
  }
  // Mask rho = u * 2^m + s with u_c < 2^(k-3-m) and s_c < 2^(m-2), one
  // component per party pair. With the bias B = 2^(k-2) and |x| < 2^(k-2),
  // x + B + rho stays below 2^k, so the opened value has no modular wrap.
  std::array<std::vector<Word>, kParties> u;
  std::array<std::vector<Word>, kParties> rho;
  for (int c = 0; c < kParties; ++c) {
    u[c].resize(n);
    rho[c].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const unsigned m = shifts[j];
      u[c][j] = bounded_word(pair_rng_, k - 3 - m);
      const Word s = m >= 2 ? bounded_word(pair_rng_, m - 2) : 0;
      rho[c][j] = (u[c][j] << m) + s;
    }
  }
  const Word bias = pow2(k - 2);
  SharedVector masked(k, n);
  for (int p = 0; p < kParties; ++p) {
    const int c0 = p;
    const int c1 = next_party(p);
    for (std::size_t j = 0; j < n; ++j) {
      masked.first(p)[j] = wrap(x.first(p)[j] + rho[c0][j] + (c0 == 0 ? bias : 0), k);
      masked.second(p)[j] = wrap(x.second(p)[j] + rho[c1][j] + (c1 == 0 ? bias : 0), k);
    }
  }
  const auto opened = open_checked(masked, Opcode::MaskedOpen);
  std::array<std::vector<Word>, kParties> result;
  for (auto& r : result) r.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const unsigned m = shifts[j];
    result[0][j] = wrap((opened[j] >> m) - (bias >> m) - u[0][j], k);
    result[1][j] = wrap(Word{0} - u[1][j], k);
    result[2][j] = wrap(Word{0} - u[2][j], k);
  }
  return SharedVector::from_components(k, result);
}

SharedVector Session::truncate(const SharedVector& x, unsigned shift) {
  if (x.bits() != bits()) throw UsageError("truncate: ring width mismatch");
  if (shift == 0) throw UsageError("truncate: shift must be positive");
  return truncate_each(x, std::vector<unsigned>(x.size(), shift));
}

SharedVector Session::truncate(const SharedVector& x, const FixedPointCodec& codec) {
  if (codec.k() != bits()) throw UsageError("truncate: codec width does not match session");
  return truncate(x, codec.fraction_bits());
}

SharedVector Session::fixed_mul(const SharedVector& x, const SharedVector& y,
                                const FixedPointCodec& codec) {
  return truncate(secure_mul(x, y), codec);
}

std::vector<unsigned> Session::reveal_bit_width(const SharedVector& x) {
  const unsigned k = bits();
  const std::size_t n = x.size();
  // Dealer mask r with bitwise sharings [r_i]; open c = x + r and recover the
  // bits of x = c - r with a borrow chain over the shared mask bits.
  std::vector<Word> r(n);
  for (auto& w : r) w = uniform_word(dealer_rng_, k);
  std::vector<SharedVector> r_bits;
  r_bits.reserve(k);
  std::vector<Word> scratch(n);
  for (unsigned i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) scratch[j] = (r[j] >> i) & 1U;
    r_bits.push_back(dealer_share(scratch));
  }
  SharedVector r_shared(k, n);
  for (unsigned i = 0; i < k; ++i) r_shared = secure_add(r_shared, mul_constant(r_bits[i], pow2(i)));
  const auto c = reconstruct(secure_add(x, r_shared));

  const Word minus_one = wrap(~Word{0}, k);
  std::vector<SharedVector> d(k);
  SharedVector borrow(k, n);
  std::vector<Word> c_bit(n), flip(n), a(n), one_minus_2a(n);
  for (unsigned i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c_bit[j] = (c[j] >> i) & 1U;
      flip[j] = c_bit[j] ? minus_one : 1;  // 1 - 2 c_i
      a[j] = 1 - c_bit[j];
      one_minus_2a[j] = a[j] ? minus_one : 1;
    }
    const SharedVector& ri = r_bits[i];
    SharedVector u;  // r_i XOR borrow_i
    SharedVector t;  // r_i AND borrow_i
    if (i == 0) {
      u = ri;
      t = SharedVector(k, n);
    } else {
      t = secure_mul(ri, borrow);
      u = secure_sub(secure_add(ri, borrow), mul_constant(t, 2));
    }
    d[i] = add_constant(mul_constant(u, flip), c_bit);
    if (i + 1 < k) {
      // Borrow out of c_i - r_i - borrow_i is maj(1 - c_i, r_i, borrow_i).
      borrow = secure_add(mul_constant(secure_add(ri, borrow), a), mul_constant(t, one_minus_2a));
    }
  }
  // Prefix OR from the most significant bit; the count of ones is the width.
  SharedVector prefix = d[k - 1];
  SharedVector width = prefix;
  for (unsigned i = k - 1; i-- > 0;) {
    prefix = secure_sub(secure_add(prefix, d[i]), secure_mul(prefix, d[i]));
    width = secure_add(width, prefix);
  }
  const auto opened = reconstruct(width);
  std::vector<unsigned> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (opened[j] > k) throw IntegrityError("secure_div: bit decomposition produced an invalid width");
    out[j] = static_cast<unsigned>(opened[j]);
  }
  return out;
}

SharedVector Session::secure_div(const SharedVector& num, const SharedVector& den,
                                 const FixedPointCodec& codec, unsigned theta) {
  require_compatible(num, den);
  if (codec.k() != bits()) throw UsageError("secure_div: codec width does not match session");
  if (theta == 0) throw UsageError("secure_div: theta must be positive");
  const unsigned k = bits();
  const unsigned f = codec.fraction_bits();
  const unsigned top = k - 2;
  if (f + 1 > top) throw UsageError("secure_div: fraction bits too large for the ring");
  const std::size_t n = num.size();

  CostMeter::ModelScope scope(meter_);
  const auto width = reveal_bit_width(den);
  for (std::size_t j = 0; j < n; ++j) {
    if (width[j] == 0) throw DomainError("secure_div: denominator is zero");
    if (width[j] > top) throw DomainError("secure_div: denominator is negative or out of range");
  }
  // Normalize den into [2^(top-1), 2^top), then rescale to b in [0.5, 1).
  std::vector<Word> lift(n);
  for (std::size_t j = 0; j < n; ++j) lift[j] = pow2(top - width[j]);
  SharedVector b = truncate(mul_constant(den, lift), top - f);

  const Word offset = ring::encode_fixed_word(kGoldschmidtOffset, codec);
  const Word two = ring::encode_fixed_word(2.0, codec);
  const Word minus_one = wrap(~Word{0}, k);
  const SharedVector w0 = add_constant(mul_constant(b, wrap(Word{0} - 2, k)), offset);

  SharedVector ab = fixed_mul(num.concat(b), w0.concat(w0), codec);
  for (unsigned it = 0; it < theta; ++it) {
    const SharedVector fb = add_constant(mul_constant(ab.slice(n, n), minus_one), two);
    ab = fixed_mul(ab, fb.concat(fb), codec);
  }
  // a approximates num / (den * 2^(top - width - f)); undo the normalization.
  SharedVector quotient = ab.slice(0, n);
  std::vector<Word> scale(n, 1);
  std::vector<unsigned> shifts(n, 0);
  bool any_shift = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (width[j] <= f) {
      scale[j] = pow2(f - width[j]);
    } else {
      shifts[j] = width[j] - f;
      any_shift = true;
    }
  }
  quotient = mul_constant(quotient, scale);
  if (any_shift) quotient = truncate_each(quotient, shifts);

  scope.finish(CostReport{0, n * div_cost_bits(k, theta), 0});
  return quotient;
}

}  // namespace tnmpcqep::mpc
