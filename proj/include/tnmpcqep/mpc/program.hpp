#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tnmpcqep/mpc/meter.hpp"
#include "tnmpcqep/mpc/transport.hpp"
#include "tnmpcqep/ring.hpp"

namespace tnmpcqep::mpc {

enum class OpKind { Add, Sub, AddConst, MulConst, Mul, Truncate, FixedMul, Div, Open };

/// One instruction over scalar registers. Registers 0..inputs-1 hold the
/// secret inputs; every instruction except Open defines the next register.
struct Instruction {
  OpKind kind = OpKind::Add;
  std::size_t a = 0;
  std::size_t b = 0;
  double real_constant = 0.0;     // AddConst (fixed-point encoded)
  std::int64_t int_constant = 0;  // MulConst (public integer)

  static Instruction add(std::size_t a, std::size_t b) { return {OpKind::Add, a, b}; }
  static Instruction sub(std::size_t a, std::size_t b) { return {OpKind::Sub, a, b}; }
  static Instruction add_const(std::size_t a, double c) { return {OpKind::AddConst, a, 0, c}; }
  static Instruction mul_const(std::size_t a, std::int64_t c) { return {OpKind::MulConst, a, 0, 0.0, c}; }
  static Instruction mul(std::size_t a, std::size_t b) { return {OpKind::Mul, a, b}; }
  static Instruction truncate(std::size_t a) { return {OpKind::Truncate, a}; }
  static Instruction fixed_mul(std::size_t a, std::size_t b) { return {OpKind::FixedMul, a, b}; }
  static Instruction div(std::size_t a, std::size_t b) { return {OpKind::Div, a, b}; }
  static Instruction open(std::size_t a) { return {OpKind::Open, a}; }
};

struct Program {
  std::vector<double> inputs;  // real values, fixed-point encoded by the client
  std::vector<Instruction> ops;
};

struct ProtocolConfig {
  unsigned bits = ring::kDefaultBits;
  unsigned fraction_bits = 20;
  unsigned theta = 5;
  SecurityMode mode = SecurityMode::Passive;
  std::uint64_t seed = 0;
};

struct ProtocolResult {
  std::vector<ring::Word> opened;  // raw ring words, in Open order
  std::vector<double> decoded;     // fixed-point decoded
  CostReport cost;                 // modeled cost (security factor applied)
  CostReport wire;                 // payload bits actually sent
};

/// Validate and execute `program` in a fresh session. Throws UsageError when
/// an instruction references an undefined register.
ProtocolResult run_protocol(const Program& program, const ProtocolConfig& config,
                            std::unique_ptr<Transport> transport = nullptr);

}  // namespace tnmpcqep::mpc
