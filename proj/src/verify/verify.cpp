#include "tnmpcqep/verify/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "tnmpcqep/bench/scenario.hpp"
#include "tnmpcqep/common/bundle.hpp"
#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/mpc/program.hpp"
#include "tnmpcqep/mpc/session.hpp"
#include "tnmpcqep/pipeline/aggregation.hpp"
#include "tnmpcqep/pipeline/metrics.hpp"
#include "tnmpcqep/qep/processor.hpp"
#include "tnmpcqep/qsim/density.hpp"
#include "tnmpcqep/qsim/statevector.hpp"
#include "tnmpcqep/tn/frontend.hpp"
#include "tnmpcqep/tn/patches.hpp"

namespace tnmpcqep::verify {
namespace {

constexpr double kIsometryTolerance = 1e-8;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

class Recorder {
 public:
  Recorder(std::string group, std::vector<Check>& out) : group_(std::move(group)), out_(out) {}

  // Runs `fn`, which returns an empty string on success or a failure detail.
  void run(const std::string& name, const std::function<std::string()>& fn) {
    Check c{group_, name, false, {}};
    try {
      c.detail = fn();
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    out_.push_back(std::move(c));
  }

 private:
  std::string group_;
  std::vector<Check>& out_;
};

std::string bound(double value, double limit, const std::string& what) {
  if (value <= limit) return {};
  return what + " " + fmt(value) + " > " + fmt(limit);
}

RVector random_image(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVector x(tn::kImagePixels);
  for (auto& v : x) v = u(rng);
  return x;
}

// Defect of every isometric tensor stored in a raw bundle, before the loader
// gets a chance to re-project it.
std::string bundle_defects(const ParamBundle& b) {
  std::string failures;
  for (const auto& t : b.tensors) {
    const bool disentangler = t.name.find("disentangler") != std::string::npos;
    if (!disentangler && t.name.find("isometry") == std::string::npos && t.name.find("core") == std::string::npos)
      continue;
    const tn::CMatrix q = to_complex_matrix(t);
    const double defect = disentangler ? tn::unitarity_defect(q) : tn::isometry_defect(q);
    if (!(defect <= kIsometryTolerance))
      failures += (failures.empty() ? "" : "; ") + std::string(disentangler ? "unitarity(" : "isometry(") + t.name +
                  ") defect " + fmt(defect);
  }
  return failures;
}

void tn_group(const VerifyOptions& opt, std::vector<Check>& out) {
  Recorder r("tn", out);
  if (opt.tn_params) {
    r.run("bundle readable", [&] {
      read_bundle(*opt.tn_params);
      return std::string();
    });
    r.run("stored isometries", [&] { return bundle_defects(read_bundle(*opt.tn_params)); });
    r.run("loaded frontend encodes", [&] {
      const tn::Frontend f = tn::Frontend::load(*opt.tn_params);
      std::mt19937_64 rng(opt.seed);
      const RVector z = f.encode(random_image(rng));
      return z.allFinite() && z.size() == f.config().d ? std::string() : std::string("non-finite or misshaped latent");
    });
    return;
  }
  for (auto kind : {tn::FrontendKind::MPS, tn::FrontendKind::TTN, tn::FrontendKind::MERA}) {
    r.run(tn::to_string(kind) + " isometries", [&] {
      tn::FrontendConfig c;
      c.kind = kind;
      c.seed = opt.seed;
      return bound(tn::Frontend(c).max_isometry_defect(), kIsometryTolerance, "defect");
    });
    r.run(tn::to_string(kind) + " unit state", [&] {
      tn::FrontendConfig c;
      c.kind = kind;
      c.seed = opt.seed;
      const tn::Frontend f(c);
      std::mt19937_64 rng(opt.seed + 1);
      double worst = 0;
      for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(f.state(random_image(rng)).norm() - 1.0));
      return bound(worst, 1e-10, "norm error");
    });
  }
  r.run("mera with identity disentanglers equals ttn", [&] {
    tn::FrontendConfig c;
    c.seed = opt.seed;
    c.kind = tn::FrontendKind::TTN;
    const tn::Frontend ttn(c);
    c.kind = tn::FrontendKind::MERA;
    tn::Frontend mera(c);
    mera.set_identity_disentanglers();
    std::mt19937_64 rng(opt.seed + 2);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      const RVector x = random_image(rng);
      worst = std::max(worst, (ttn.encode(x) - mera.encode(x)).cwiseAbs().maxCoeff());
    }
    return bound(worst, 1e-12, "max difference");
  });
}

void mpc_group(const VerifyOptions& opt, std::vector<Check>& out) {
  Recorder r("mpc", out);
  const ring::FixedPointCodec codec(64, 20);
  const double ulp = codec.ulp();
  r.run("share and reconstruct", [&] {
    mpc::Session s({64, mpc::SecurityMode::Passive, opt.seed});
    std::vector<ring::Word> v{0, 1, 42, ~ring::Word{0}, ring::Word{1} << 63};
    const auto back = s.reconstruct(s.share(v));
    return back == v ? std::string() : std::string("reconstruction differs");
  });
  r.run("primitive costs", [&] {
    std::string failures;
    const auto delta = [&](const std::function<void(mpc::Session&, const mpc::SharedVector&)>& op) {
      mpc::Session s({64, mpc::SecurityMode::Passive, opt.seed});
      const auto x = s.share_fixed(std::vector<double>{1.5}, codec);
      const auto before = s.meter().report().total();
      op(s, x);
      return s.meter().report().total() - before;
    };
    const auto check = [&](const char* name, std::uint64_t got, std::uint64_t want) {
      if (got != want) failures += std::string(name) + " " + std::to_string(got) + " != " + std::to_string(want) + "; ";
    };
    check("mul", delta([](auto& s, const auto& x) { s.secure_mul(x, x); }), 192);
    check("truncate", delta([&](auto& s, const auto& x) { s.truncate(x, codec); }), 384);
    check("fixed_mul", delta([&](auto& s, const auto& x) { s.fixed_mul(x, x, codec); }), 576);
    check("div", delta([&](auto& s, const auto& x) { s.secure_div(x, x, codec, 5); }), 16512);
    return failures;
  });
  r.run("fixed-point arithmetic against plaintext", [&] {
    std::mt19937_64 rng(opt.seed + 3);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
      const double a = u(rng), b = u(rng);
      mpc::Program p{{a, b}, {mpc::Instruction::fixed_mul(0, 1), mpc::Instruction::open(2),
                              mpc::Instruction::mul(0, 1), mpc::Instruction::truncate(3), mpc::Instruction::open(4),
                              mpc::Instruction::add(0, 1), mpc::Instruction::open(5)}};
      const auto res = mpc::run_protocol(p, {64, 20, 5, mpc::SecurityMode::Passive, opt.seed + t});
      // Input encoding contributes |a| + |b| half-ulps to a product.
      const double prod_tol = 2 * ulp + (std::abs(a) + std::abs(b) + 1) * ulp / 2;
      worst = std::max({worst, std::abs(res.decoded[0] - a * b) / prod_tol, std::abs(res.decoded[1] - a * b) / prod_tol,
                        std::abs(res.decoded[2] - (a + b)) / ulp});
    }
    return bound(worst, 1.0, "error / tolerance");
  });
  r.run("goldschmidt relative error", [&] {
    std::mt19937_64 rng(opt.seed + 4);
    std::uniform_real_distribution<double> expo(-6.0, 6.0), num(-4.0, 4.0);
    std::vector<double> nums, dens;
    for (int i = 0; i < 64; ++i) {
      nums.push_back(num(rng));
      dens.push_back(std::exp2(expo(rng)));
    }
    mpc::Session s({64, mpc::SecurityMode::Passive, opt.seed});
    const auto q = s.reconstruct_fixed(s.secure_div(s.share_fixed(nums, codec), s.share_fixed(dens, codec), codec, 5), codec);
    double worst = 0;
    for (std::size_t i = 0; i < nums.size(); ++i) {
      const double exact = nums[i] / dens[i];
      worst = std::max(worst, std::abs(q[i] - exact) / std::max(std::abs(exact), 1.0));
    }
    return bound(worst, std::exp2(-10), "relative error");
  });
  r.run("tampered share detected", [&] {
    mpc::Session s({64, mpc::SecurityMode::Passive, opt.seed});
    auto x = s.share(std::vector<ring::Word>{7});
    x.first(0)[0] += 1;
    try {
      s.reconstruct(x);
    } catch (const IntegrityError&) {
      return std::string();
    }
    return std::string("inconsistent replicas were accepted");
  });
}

void qsim_group(const VerifyOptions& opt, std::vector<Check>& out) {
  Recorder r("qsim", out);
  r.run("serial and openmp agree", [&] {
    std::mt19937_64 rng(opt.seed + 5);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    std::vector<double> angles(2 * 2 * 10);
    for (auto& a : angles) a = u(rng);
    const auto s = qsim::run_circuit(angles, 2, 10, Backend::Serial);
    const auto p = qsim::run_circuit(angles, 2, 10, Backend::OpenMP);
    double worst = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) worst = std::max(worst, std::abs(s.amplitudes()[i] - p.amplitudes()[i]));
    return bound(worst, 1e-14, "max amplitude difference");
  });
  r.run("16-qubit norm", [&] {
    std::mt19937_64 rng(opt.seed + 6);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    std::vector<double> angles(2 * 2 * 16);
    for (auto& a : angles) a = u(rng);
    return bound(std::abs(qsim::run_circuit(angles, 2, 16).norm() - 1.0), 1e-12, "norm error");
  });
  r.run("depolarizing expectation", [&] {
    double worst = 0;
    for (double p : {0.0, 0.1, 0.5, 1.0}) {
      for (double theta : {0.3, 1.2, 2.5}) {
        qsim::DensityMatrix rho(1, Backend::Serial);
        rho.apply(qsim::Gate::ry(0, theta));
        rho.apply_superoperator(0, qsim::depolarizing_superoperator(p));
        const double z = rho.expectation(qsim::PauliTerm(0, qsim::Pauli::Z));
        worst = std::max(worst, std::abs(z - (1 - p) * std::cos(theta)));
      }
    }
    return bound(worst, 1e-10, "max error");
  });
  r.run("noiseless density matches statevector", [&] {
    std::mt19937_64 rng(opt.seed + 7);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    std::vector<double> angles(2 * 2 * 4);
    for (auto& a : angles) a = u(rng);
    const auto psi = qsim::run_circuit(angles, 2, 4, Backend::Serial);
    qsim::NoiseSpec zero{qsim::NoiseKind::Mixed, 0.0, 0.0, 0.0};
    const auto rho = qsim::run_noisy(angles, 2, 4, zero, Backend::Serial);
    double worst = 0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
      for (std::size_t j = 0; j < psi.dim(); ++j)
        worst = std::max(worst, std::abs(rho.at(i, j) - psi.amplitudes()[i] * std::conj(psi.amplitudes()[j])));
    return bound(worst, 1e-12, "max entry difference");
  });
  r.run("noisy state is a density matrix", [&] {
    std::mt19937_64 rng(opt.seed + 8);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    std::vector<double> angles(2 * 2 * 4);
    for (auto& a : angles) a = u(rng);
    const auto rho = qsim::run_noisy(angles, 2, 4, {qsim::NoiseKind::Mixed, 0.05, 0.05, 0.05}, Backend::Serial);
    const double defect = std::max({std::abs(rho.trace() - 1.0), rho.hermiticity_defect(), -rho.min_eigenvalue()});
    return bound(defect, 1e-10, "trace/hermiticity/positivity defect");
  });
}

void bench_group(const VerifyOptions& opt, std::vector<Check>& out) {
  Recorder r("bench", out);
  r.run("executed protocol matches closed form", [&] {
    std::string failures;
    for (int s : {1, 2, 4, 5}) {
      for (unsigned n : {1u, 2u, 4u}) {
        for (unsigned d : {1u, 4u, 16u}) {
          bench::BenchConfig c;
          c.n = n;
          c.d = d;
          if (!bench::verify_against_meter(c, bench::Scenario(s), opt.seed))
            failures += "S" + std::to_string(s) + " n=" + std::to_string(n) + " d=" + std::to_string(d) + "; ";
        }
      }
    }
    return failures;
  });
  r.run("active doubles passive", [&] {
    for (unsigned n = 1; n <= 30; ++n) {
      for (unsigned d : {64u, 784u}) {
        bench::BenchConfig c;
        c.n = n;
        c.d = d;
        for (int s : {4, 5, 6}) {
          const auto a = bench::run_scenario(c, bench::Scenario(s));
          const auto p = bench::run_scenario(c, bench::Scenario(s - 3));
          if (a.client_to_node_bits != 2 * p.client_to_node_bits || a.node_to_node_bits != 2 * p.node_to_node_bits ||
              a.reconstruction_bits != 2 * p.reconstruction_bits)
            return "S" + std::to_string(s) + " n=" + std::to_string(n) + " d=" + std::to_string(d);
        }
      }
    }
    return std::string();
  });
  r.run("scenario 1 reference point", [&] {
    bench::BenchConfig c;  // n=16, d=64, k=64
    const auto cost = bench::run_scenario(c, bench::Scenario(1));
    return cost.client_to_node_bits == 399360 && cost.node_to_node_bits == 589824 &&
                   cost.reconstruction_bits == 12480 && cost.total() == 1001664
               ? std::string()
               : "total " + std::to_string(cost.total());
  });
}

void qep_group(const VerifyOptions& opt, std::vector<Check>& out) {
  Recorder r("qep", out);
  qep::QepConfig cfg;
  cfg.seed = opt.seed;
  std::mt19937_64 rng(opt.seed + 9);
  std::normal_distribution<double> g(0.0, 1.0);
  RVector x(cfg.d);
  for (auto& v : x) v = g(rng);
  r.run("alpha zero returns the aggregate", [&] {
    qep::QepParams p = qep::QepParams::random(cfg);
    p.alpha_bias = -1e3;
    return bound((qep::qep_forward(x, p) - x).cwiseAbs().maxCoeff(), 1e-9, "max difference");
  });
  r.run("beta one makes the circuit inert", [&] {
    qep::QepParams p = qep::QepParams::random(cfg);
    p.beta = 1.0;
    const RVector a = qep::qep_forward(x, p);
    for (auto& d : p.delta) d += 0.1;
    return bound((qep::qep_forward(x, p) - a).cwiseAbs().maxCoeff(), 1e-12, "max difference");
  });
  r.run("observables bounded", [&] {
    const qep::QepParams p = qep::QepParams::random(cfg);
    const auto t = qep::qep_trace(x * 10.0, p);
    return bound(t.q_raw.cwiseAbs().maxCoeff(), 1.0, "max |q_raw|");
  });
  r.run("suggested qubits for d=64", [&] {
    return qep::suggest_qubits(64) == 8 ? std::string() : "got " + std::to_string(qep::suggest_qubits(64));
  });
}

void pipeline_group(const VerifyOptions& opt, std::vector<Check>& out) {
  Recorder r("pipeline", out);
  r.run("secure aggregation matches plaintext", [&] {
    std::mt19937_64 rng(opt.seed + 10);
    std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.5, 20.0);
    const int n = 8, d = 16;
    RMatrix f(n, d);
    for (auto& v : f.reshaped()) v = u(rng);
    std::vector<double> weights(n);
    for (auto& v : weights) v = w(rng);
    pipeline::AggregationConfig c;
    c.seed = opt.seed;
    const auto s = pipeline::aggregate_secure(f, weights, c);
    const RVector plain = pipeline::aggregate_plain(f, weights, c.epsilon);
    const double tol = n * 4 * std::exp2(-static_cast<double>(c.fraction_bits));
    return bound((s.x.row(0).transpose() - plain).cwiseAbs().maxCoeff(), tol, "max difference");
  });
  r.run("threshold selection separable case", [&] {
    const std::vector<double> scores{0.1, 0.2, 0.8, 0.9};
    const std::vector<int> labels{0, 0, 1, 1};
    const auto t = pipeline::select_threshold(scores, labels);
    return t.tau == 0.5 && t.objective == 1.0 ? std::string() : "tau " + fmt(t.tau);
  });
}

}  // namespace

const std::vector<std::string>& group_names() {
  static const std::vector<std::string> names{"tn", "mpc", "qsim", "bench", "qep", "pipeline"};
  return names;
}

std::vector<Check> run_checks(const VerifyOptions& options) {
  static const std::map<std::string, void (*)(const VerifyOptions&, std::vector<Check>&)> table{
      {"tn", tn_group},       {"mpc", mpc_group}, {"qsim", qsim_group},
      {"bench", bench_group}, {"qep", qep_group}, {"pipeline", pipeline_group}};
  for (const auto& g : options.groups)
    if (!table.contains(g)) throw UsageError("unknown verify group '" + g + "'");
  std::vector<Check> out;
  for (const auto& g : group_names()) {
    if (!options.groups.empty() && std::find(options.groups.begin(), options.groups.end(), g) == options.groups.end())
      continue;
    table.at(g)(options, out);
  }
  return out;
}

bool print_checks(std::ostream& out, const std::vector<Check>& checks) {
  bool all = true;
  std::vector<std::string> order;
  std::map<std::string, bool> group_ok;
  for (const auto& c : checks) {
    out << (c.passed ? "  ok   " : "  FAIL ") << c.group << ": " << c.name;
    if (!c.passed) out << " (" << c.detail << ")";
    out << '\n';
    if (!group_ok.contains(c.group)) {
      order.push_back(c.group);
      group_ok[c.group] = true;
    }
    group_ok[c.group] = group_ok[c.group] && c.passed;
    all = all && c.passed;
  }
  for (const auto& g : order) out << (group_ok[g] ? "PASS " : "FAIL ") << g << '\n';
  return all;
}

}  // namespace tnmpcqep::verify
