#pragma once

// Random fixed-point programs and a plaintext reference evaluated in long
// double on the encoded inputs, with an error bound carried per register.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tnmpcqep/mpc/program.hpp"

namespace oracle {

struct Expected {
  long double value;
  long double tolerance;
};

struct GeneratedProgram {
  tnmpcqep::mpc::Program program;
  std::vector<Expected> outputs;  // one per Open, in order
  int truncations = 0;
};

inline long double quantize(double v, unsigned f) {
  return std::round(static_cast<long double>(v) * std::ldexp(1.0L, static_cast<int>(f))) /
         std::ldexp(1.0L, static_cast<int>(f));
}

// Values stay within [-1e4, 1e4] at scale F and [-1e6, 1e6] at scale 2F so
// that no intermediate leaves the 64-bit fixed-point range.
inline GeneratedProgram random_program(std::mt19937_64& rng, unsigned f, int max_ops = 10) {
  using tnmpcqep::mpc::Instruction;
  struct Reg {
    long double v, err;
    int scale;
  };
  const long double ulp = std::ldexp(1.0L, -static_cast<int>(f));
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_int_distribution<int> n_inputs(2, 4), n_ops(1, max_ops), kind(0, 6), small(-5, 5);

  GeneratedProgram g;
  std::vector<Reg> regs;
  for (int i = n_inputs(rng); i > 0; --i) {
    const double v = value(rng);
    g.program.inputs.push_back(v);
    regs.push_back({quantize(v, f), 0.0L, 1});
  }
  const auto pick = [&](int scale) -> long {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < regs.size(); ++i)
      if (regs[i].scale == scale) c.push_back(i);
    if (c.empty()) return -1;
    return static_cast<long>(c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng)]);
  };
  const auto fits = [](long double v, int scale) { return std::abs(v) <= (scale == 1 ? 1e4L : 1e6L); };

  const int ops = n_ops(rng);
  for (int attempts = 0; static_cast<int>(g.program.ops.size()) < ops && attempts < 1000; ++attempts) {
    const int k = kind(rng);
    const int scale = (k == 4) ? 2 : (k <= 1 && std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 2 : 1);
    const long a = pick(scale), b = pick(scale);
    if (a < 0) continue;
    const Reg& A = regs[static_cast<std::size_t>(a)];
    const Reg& B = regs[static_cast<std::size_t>(b)];
    Reg r{};
    Instruction ins;
    switch (k) {
      case 0:  // add
        r = {A.v + B.v, A.err + B.err, scale};
        ins = Instruction::add(a, b);
        break;
      case 1:  // sub
        r = {A.v - B.v, A.err + B.err, scale};
        ins = Instruction::sub(a, b);
        break;
      case 2: {  // add public real constant
        if (scale != 1) continue;
        const double c = value(rng);
        r = {A.v + quantize(c, f), A.err, 1};
        ins = Instruction::add_const(a, c);
        break;
      }
      case 3: {  // multiply by a public integer
        const int c = small(rng);
        r = {A.v * c, A.err * std::abs(c), scale};
        ins = Instruction::mul_const(a, c);
        break;
      }
      case 4:  // truncate a scale-2F register
        r = {A.v, A.err + 2 * ulp, 1};
        ins = Instruction::truncate(a);
        ++g.truncations;
        break;
      case 5:  // raw product, scale 2F
        r = {A.v * B.v, std::abs(A.v) * B.err + std::abs(B.v) * A.err + A.err * B.err, 2};
        ins = Instruction::mul(a, b);
        break;
      case 6:  // fixed-point product
        r = {A.v * B.v, std::abs(A.v) * B.err + std::abs(B.v) * A.err + A.err * B.err + 2 * ulp, 1};
        ins = Instruction::fixed_mul(a, b);
        ++g.truncations;
        break;
    }
    if (!fits(r.v, r.scale)) continue;
    regs.push_back(r);
    g.program.ops.push_back(ins);
  }
  // Open every scale-F register defined by an instruction, or an input when
  // none exists.
  bool opened = false;
  for (std::size_t i = g.program.inputs.size(); i < regs.size(); ++i) {
    if (regs[i].scale != 1) continue;
    g.program.ops.push_back(Instruction::open(i));
    g.outputs.push_back({regs[i].v, regs[i].err});
    opened = true;
  }
  if (!opened) {
    g.program.ops.push_back(Instruction::open(0));
    g.outputs.push_back({regs[0].v, regs[0].err});
  }
  return g;
}

}  // namespace oracle
