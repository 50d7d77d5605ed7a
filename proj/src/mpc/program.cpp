#include "tnmpcqep/mpc/program.hpp"

#include <string>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/mpc/session.hpp"

namespace tnmpcqep::mpc {
namespace {

bool is_binary(OpKind kind) {
  return kind == OpKind::Add || kind == OpKind::Sub || kind == OpKind::Mul ||
         kind == OpKind::FixedMul || kind == OpKind::Div;
}

void validate(const Program& program) {
  std::size_t defined = program.inputs.size();
  for (std::size_t i = 0; i < program.ops.size(); ++i) {
    const auto& op = program.ops[i];
    const bool bad = op.a >= defined || (is_binary(op.kind) && op.b >= defined);
    if (bad) {
      throw UsageError("program: instruction " + std::to_string(i) +
                       " references an undefined register");
    }
    if (op.kind != OpKind::Open) ++defined;
  }
}

}  // namespace

ProtocolResult run_protocol(const Program& program, const ProtocolConfig& config,
                            std::unique_ptr<Transport> transport) {
  validate(program);
  const FixedPointCodec codec(config.bits, config.fraction_bits);
  Session session({config.bits, config.mode, config.seed}, std::move(transport));

  std::vector<SharedVector> regs;
  regs.reserve(program.inputs.size() + program.ops.size());
  if (!program.inputs.empty()) {
    const auto all = session.share_fixed(program.inputs, codec);
    for (std::size_t i = 0; i < all.size(); ++i) regs.push_back(all.slice(i, 1));
  }

  ProtocolResult result;
  for (const auto& op : program.ops) {
    const auto& x = regs[op.a];
    switch (op.kind) {
      case OpKind::Add: regs.push_back(session.secure_add(x, regs[op.b])); break;
      case OpKind::Sub: regs.push_back(session.secure_sub(x, regs[op.b])); break;
      case OpKind::AddConst:
        regs.push_back(session.add_constant(x, ring::encode_fixed_word(op.real_constant, codec)));
        break;
      case OpKind::MulConst:
        regs.push_back(session.mul_constant(x, ring::from_signed(op.int_constant, config.bits)));
        break;
      case OpKind::Mul: regs.push_back(session.secure_mul(x, regs[op.b])); break;
      case OpKind::Truncate: regs.push_back(session.truncate(x, codec)); break;
      case OpKind::FixedMul: regs.push_back(session.fixed_mul(x, regs[op.b], codec)); break;
      case OpKind::Div: regs.push_back(session.secure_div(x, regs[op.b], codec, config.theta)); break;
      case OpKind::Open: {
        const auto word = session.reconstruct(x).front();
        result.opened.push_back(word);
        result.decoded.push_back(ring::decode_fixed_word(word, codec));
        break;
      }
    }
  }
  result.cost = session.meter().report();
  result.wire = session.meter().wire();
  return result;
}

}  // namespace tnmpcqep::mpc
