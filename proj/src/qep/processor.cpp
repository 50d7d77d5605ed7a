#include "tnmpcqep/qep/processor.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/qsim/statevector.hpp"

namespace tnmpcqep::qep {
namespace {

constexpr const char* kBundleKind = "qep.params";

void check(const RVector& v, const char* stage) {
  if (!v.allFinite()) throw NumericError(std::string("qep: non-finite values after ") + stage);
}

void check_shape(const Linear& l, Eigen::Index in, Eigen::Index out, const char* name) {
  if (l.in_dim() != in || l.out_dim() != out || l.bias.size() != out) {
    throw UsageError(std::string("qep: ") + name + " has shape " + std::to_string(l.out_dim()) + "x" +
                     std::to_string(l.in_dim()) + ", expected " + std::to_string(out) + "x" + std::to_string(in));
  }
}

RVector two_layer(const Linear& first, const Linear& second, const RVector& x) {
  return second(shallow_block(first, x));
}

void add_linear(ParamBundle& b, const std::string& prefix, const Linear& l) {
  b.add(make_tensor(prefix + ".weight", l.weight));
  b.add(make_tensor(prefix + ".bias", l.bias));
}

Linear read_linear(const ParamBundle& b, const std::string& prefix) {
  return Linear(to_real_matrix(b.at(prefix + ".weight")), to_real_vector(b.at(prefix + ".bias")));
}

}  // namespace

void QepConfig::validate() const {
  if (d < 1) throw UsageError("qep: d must be positive");
  if (n_qubits < 2 || n_qubits > qsim::kMaxStateQubits) throw UsageError("qep: N_q must be in [2, 24]");
  if (layers < 1) throw UsageError("qep: depth must be positive");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw UsageError("qep: angle scale must be non-negative");
}

QepParams QepParams::random(const QepConfig& config) {
  config.validate();
  QepParams p;
  p.config = config;
  const int two_n = 2 * config.n_qubits;
  std::mt19937_64 enc(derive_seed(config.seed, "qep.encoder"));
  p.encoder_in = Linear::random(config.d, two_n, enc);
  p.encoder_out = Linear::random(two_n, two_n, enc);
  std::mt19937_64 dec(derive_seed(config.seed, "qep.decoder"));
  p.decoder_in = Linear::random(config.d_q(), config.d, dec);
  p.decoder_out = Linear::random(config.d, config.d, dec);
  std::mt19937_64 bp(derive_seed(config.seed, "qep.bypass"));
  p.bypass = Linear::random(two_n, config.d, bp);
  std::mt19937_64 fus(derive_seed(config.seed, "qep.fusion"));
  p.fusion = Linear::random(2 * config.d, config.d, fus);
  std::mt19937_64 gate(derive_seed(config.seed, "qep.alpha"));
  const Linear alpha = Linear::random(config.d, 1, gate);
  p.alpha_weight = alpha.weight.row(0).transpose();
  p.alpha_bias = 0.0;
  p.beta = 0.5;
  std::mt19937_64 off(derive_seed(config.seed, "qep.delta"));
  std::uniform_real_distribution<double> offset(-0.25, 0.25);
  p.delta.resize(static_cast<std::size_t>(config.layers) * config.n_qubits * 2);
  for (auto& v : p.delta) v = offset(off);
  return p;
}

void QepParams::validate() const {
  config.validate();
  const int two_n = 2 * config.n_qubits;
  check_shape(encoder_in, config.d, two_n, "encoder_in");
  check_shape(encoder_out, two_n, two_n, "encoder_out");
  check_shape(decoder_in, config.d_q(), config.d, "decoder_in");
  check_shape(decoder_out, config.d, config.d, "decoder_out");
  check_shape(bypass, two_n, config.d, "bypass");
  check_shape(fusion, 2 * config.d, config.d, "fusion");
  if (alpha_weight.size() != config.d) throw UsageError("qep: alpha gate weight has the wrong length");
  if (!(beta >= 0.0 && beta <= 1.0)) throw UsageError("qep: beta must lie in [0, 1]");
  if (delta.size() != static_cast<std::size_t>(config.layers) * config.n_qubits * 2) {
    throw UsageError("qep: offsets must have shape L x N_q x 2");
  }
}

AngleEncoding encode_angles(const RVector& x_agg, const QepParams& params) {
  const auto& c = params.config;
  if (x_agg.size() != c.d) throw UsageError("qep: input has length " + std::to_string(x_agg.size()) + ", expected " + std::to_string(c.d));
  check(x_agg, "input");
  AngleEncoding out;
  out.e = two_layer(params.encoder_in, params.encoder_out, x_agg);
  check(out.e, "encoder");
  out.theta.resize(params.delta.size());
  const double k = std::numbers::pi * c.scale;
  for (int l = 0; l < c.layers; ++l) {
    for (int q = 0; q < c.n_qubits; ++q) {
      const std::size_t base = (static_cast<std::size_t>(l) * c.n_qubits + q) * 2;
      out.theta[base] = k * (out.e(2 * q) + params.delta[base]);
      out.theta[base + 1] = k * (out.e(2 * q + 1) + params.delta[base + 1]);
    }
  }
  return out;
}

RVector quantum_readout(std::span<const double> theta, const QepParams& params, const qsim::NoiseSpec& noise,
                        Backend backend) {
  const auto& c = params.config;
  const auto terms = observable_set(c.n_qubits, c.mode);
  RVector q(static_cast<Eigen::Index>(terms.size()));
  if (noise.kind == qsim::NoiseKind::Noiseless) {
    const auto state = qsim::run_circuit(theta, c.layers, c.n_qubits, backend);
    for (std::size_t m = 0; m < terms.size(); ++m) q(m) = state.expectation(terms[m]);
  } else {
    const auto rho = qsim::run_noisy(theta, c.layers, c.n_qubits, noise, backend);
    for (std::size_t m = 0; m < terms.size(); ++m) q(m) = rho.expectation(terms[m]);
  }
  return q;
}

QepTrace qep_trace(const RVector& x_agg, const QepParams& params, const qsim::NoiseSpec& noise, Backend backend) {
  QepTrace t;
  t.angles = encode_angles(x_agg, params);
  t.q_raw = quantum_readout(t.angles.theta, params, noise, backend);
  check(t.q_raw, "quantum readout");
  t.q_dec = two_layer(params.decoder_in, params.decoder_out, t.q_raw);
  check(t.q_dec, "decoder");
  t.q_bp = params.bypass(t.angles.e);
  check(t.q_bp, "bypass");
  t.q = (1.0 - params.beta) * t.q_dec + params.beta * t.q_bp;
  RVector joined(2 * params.config.d);
  joined << x_agg, t.q;
  t.z = params.fusion(joined);
  check(t.z, "fusion");
  t.alpha = sigmoid(params.alpha_weight.dot(layer_norm(x_agg)) + params.alpha_bias);
  if (!std::isfinite(t.alpha)) throw NumericError("qep: non-finite values after alpha gate");
  t.f_out = t.alpha * t.z + (1.0 - t.alpha) * x_agg;
  check(t.f_out, "output interpolation");
  return t;
}

RVector qep_forward(const RVector& x_agg, const QepParams& params, const qsim::NoiseSpec& noise,
                    QepDiagnostics* diagnostics) {
  QepTrace t = qep_trace(x_agg, params, noise, Backend::Serial);
  if (diagnostics) {
    RMatrix q = t.q.transpose();
    RVector alpha(1);
    alpha(0) = t.alpha;
    *diagnostics = summarize(q, alpha, params.config);
  }
  return t.f_out;
}

QepDiagnostics summarize(const RMatrix& q, const RVector& alpha, const QepConfig& config) {
  QepDiagnostics d;
  d.n_q = config.n_qubits;
  d.d_q = config.d_q();
  d.batch = static_cast<std::size_t>(alpha.size());
  if (alpha.size() == 0) return d;
  d.alpha_mean = alpha.mean();
  const double mean = q.mean();
  d.q_std = std::sqrt((q.array() - mean).square().mean());
  return d;
}

QepBatchResult qep_forward_batch(const RMatrix& x, const QepParams& params, const qsim::NoiseSpec& noise,
                                 Backend backend) {
  params.validate();
  noise.validate();
  if (x.rows() == 0) throw UsageError("qep: empty batch");
  if (x.cols() != params.config.d) throw UsageError("qep: batch columns must equal d");
  const Eigen::Index n = x.rows();
  QepBatchResult r;
  r.f_out.resize(n, params.config.d);
  r.q.resize(n, params.config.d);
  r.alpha.resize(n);
  auto run_one = [&](Eigen::Index i) {
    const QepTrace t = qep_trace(x.row(i).transpose(), params, noise, Backend::Serial);
    r.f_out.row(i) = t.f_out.transpose();
    r.q.row(i) = t.q.transpose();
    r.alpha(i) = t.alpha;
  };
  if (backend == Backend::OpenMP) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 2)
    for (Eigen::Index i = 0; i < n; ++i) {
      try {
        run_one(i);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) run_one(i);
  }
  r.diagnostics = summarize(r.q, r.alpha, params.config);
  return r;
}

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsRow> rows) {
  out << "batch_id,n_q,d_q,alpha_mean,q_std,noise_kind,seed\n";
  for (const auto& row : rows) {
    out << row.batch_id << ',' << row.diagnostics.n_q << ',' << row.diagnostics.d_q << ',' << row.diagnostics.alpha_mean
        << ',' << row.diagnostics.q_std << ',' << row.noise_kind << ',' << row.seed << '\n';
  }
}

ParamBundle QepParams::to_bundle() const {
  validate();
  ParamBundle b;
  b.kind = kBundleKind;
  b.seed = config.seed;
  b.add(make_scalar("config.d", config.d));
  b.add(make_scalar("config.n_qubits", config.n_qubits));
  b.add(make_scalar("config.layers", config.layers));
  b.add(make_scalar("config.scale", config.scale));
  b.add(make_scalar("config.mode", config.mode == ObservableMode::AllPairs ? 1.0 : 0.0));
  add_linear(b, "encoder_in", encoder_in);
  add_linear(b, "encoder_out", encoder_out);
  add_linear(b, "decoder_in", decoder_in);
  add_linear(b, "decoder_out", decoder_out);
  add_linear(b, "bypass", bypass);
  add_linear(b, "fusion", fusion);
  b.add(make_tensor("alpha.weight", alpha_weight));
  b.add(make_scalar("alpha.bias", alpha_bias));
  b.add(make_scalar("beta_logit", std::log(beta) - std::log1p(-beta)));
  b.add(make_tensor("delta", RVector(Eigen::Map<const RVector>(delta.data(), static_cast<Eigen::Index>(delta.size())))));
  return b;
}

QepParams QepParams::from_bundle(const ParamBundle& b) {
  if (b.kind != kBundleKind) throw ParseError("bundle kind '" + b.kind + "' is not a QEP bundle");
  QepParams p;
  try {
    p.config.d = static_cast<int>(std::lround(to_scalar(b.at("config.d"))));
    p.config.n_qubits = static_cast<int>(std::lround(to_scalar(b.at("config.n_qubits"))));
    p.config.layers = static_cast<int>(std::lround(to_scalar(b.at("config.layers"))));
    p.config.scale = to_scalar(b.at("config.scale"));
    p.config.mode = to_scalar(b.at("config.mode")) != 0.0 ? ObservableMode::AllPairs : ObservableMode::NearestNeighbor;
    p.config.seed = b.seed;
    p.encoder_in = read_linear(b, "encoder_in");
    p.encoder_out = read_linear(b, "encoder_out");
    p.decoder_in = read_linear(b, "decoder_in");
    p.decoder_out = read_linear(b, "decoder_out");
    p.bypass = read_linear(b, "bypass");
    p.fusion = read_linear(b, "fusion");
    p.alpha_weight = to_real_vector(b.at("alpha.weight"));
    p.alpha_bias = to_scalar(b.at("alpha.bias"));
    p.beta = sigmoid(to_scalar(b.at("beta_logit")));
    const RVector delta = to_real_vector(b.at("delta"));
    p.delta.assign(delta.data(), delta.data() + delta.size());
    p.validate();
  } catch (const UsageError& e) {
    throw ParseError(std::string("qep bundle: ") + e.what());
  }
  return p;
}

void QepParams::save(const std::filesystem::path& path) const { write_bundle(path, to_bundle()); }

QepParams QepParams::load(const std::filesystem::path& path) { return from_bundle(read_bundle(path)); }

}  // namespace tnmpcqep::qep
