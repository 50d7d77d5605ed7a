#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "tnmpcqep/bench/scenario.hpp"
#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/pipeline/demo.hpp"
#include "tnmpcqep/pipeline/idx.hpp"
#include "tnmpcqep/pipeline/report.hpp"
#include "tnmpcqep/pipeline/sweeps.hpp"
#include "tnmpcqep/qep/processor.hpp"
#include "tnmpcqep/tn/frontend.hpp"
#include "tnmpcqep/verify/verify.hpp"

namespace {

using namespace tnmpcqep;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Destination for --out: a file when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  bool to_stdout() const { return !file_; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::uint64_t master_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TNMPCQEP_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("TNMPCQEP_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

// Flags shared by the demo and the sweeps.
struct DemoFlags {
  std::optional<std::uint64_t> seed;
  std::string frontend = "ttn";
  std::size_t clients = 16;
  std::size_t train = 400, test = 100;
  double synth_amplitude = 0.8, synth_noise = 0.1, synth_sigma = 4.0;
  std::string train_images, train_labels, test_images, test_labels;
  std::string aggregation = "plain";
  unsigned fraction_bits = 20, theta = 5, reciprocal_shift = 12;
  bool active = false;
  std::string processor = "quantum";
  int nq = 8, layers = 2;
  double scale = 0.5;
  std::string observables = "all-pairs";
  std::string noise = "noiseless";
  double p = 0.01, gamma_amp = 0.01, gamma_phase = 0.01;
  std::optional<double> gamma;
  std::optional<double> alpha_bias;
  std::string criterion = "youden";
  int steps = 500;
  double lr = 0.5;
  bool serial = false;

  void add(CLI::App* app, bool with_processor) {
    app->add_option("--seed", seed, "Master seed (falls back to TNMPCQEP_SEED, then 0)");
    app->add_option("--frontend", frontend, "mps, ttn or mera")->capture_default_str();
    app->add_option("--clients", clients, "Number of clients")->capture_default_str();
    app->add_option("--train", train, "Synthetic training samples")->capture_default_str();
    app->add_option("--test", test, "Synthetic test samples")->capture_default_str();
    app->add_option("--synth-amplitude", synth_amplitude, "Synthetic blob amplitude")->capture_default_str();
    app->add_option("--synth-noise", synth_noise, "Synthetic pixel noise")->capture_default_str();
    app->add_option("--synth-sigma", synth_sigma, "Synthetic blob width in pixels")->capture_default_str();
    app->add_option("--train-images", train_images, "IDX training images (replaces the synthetic task)");
    app->add_option("--train-labels", train_labels, "IDX training labels");
    app->add_option("--test-images", test_images, "IDX test images");
    app->add_option("--test-labels", test_labels, "IDX test labels");
    app->add_option("--aggregation", aggregation, "plain or secure")->capture_default_str();
    app->add_option("--fraction-bits", fraction_bits, "Fixed-point fraction bits")->capture_default_str();
    app->add_option("--theta", theta, "Goldschmidt iterations")->capture_default_str();
    app->add_flag("--active", active, "Meter the secure path as actively secure");
    if (with_processor) {
      app->add_option("--processor", processor, "quantum or classical")->capture_default_str();
      app->add_option("--nq", nq, "Qubits")->capture_default_str();
    }
    app->add_option("--layers", layers, "Circuit layers")->capture_default_str();
    app->add_option("--scale", scale, "Angle scale s")->capture_default_str();
    app->add_option("--observables", observables, "all-pairs or nearest-neighbor")->capture_default_str();
    if (with_processor) app->add_option("--noise", noise, "noiseless, depolarizing, thermal or mixed")->capture_default_str();
    app->add_option("--p", p, "Depolarizing probability")->capture_default_str();
    app->add_option("--gamma", gamma, "Sets both damping rates");
    app->add_option("--gamma-amp", gamma_amp, "Amplitude damping rate")->capture_default_str();
    app->add_option("--gamma-phase", gamma_phase, "Phase damping rate")->capture_default_str();
    app->add_option("--alpha-bias", alpha_bias, "Override the alpha gate bias");
    app->add_option("--threshold", criterion, "youden or f1")->capture_default_str();
    app->add_option("--steps", steps, "Readout gradient steps")->capture_default_str();
    app->add_option("--lr", lr, "Readout learning rate")->capture_default_str();
    app->add_flag("--serial", serial, "Use the serial reference kernels");
  }

  pipeline::DemoConfig config() const {
    pipeline::DemoConfig c;
    c.seed = master_seed(seed);
    c.frontend.kind = tn::parse_frontend_kind(frontend);
    c.clients = clients;
    c.data.synth_train = train;
    c.data.synth_test = test;
    c.data.geometry.amplitude = synth_amplitude;
    c.data.geometry.noise = synth_noise;
    c.data.geometry.blob_sigma = synth_sigma;
    if (!train_images.empty() || !train_labels.empty() || !test_images.empty() || !test_labels.empty()) {
      if (train_images.empty() || train_labels.empty() || test_images.empty() || test_labels.empty())
        throw UsageError("IDX input needs --train-images, --train-labels, --test-images and --test-labels");
      c.data.train_images = train_images;
      c.data.train_labels = train_labels;
      c.data.test_images = test_images;
      c.data.test_labels = test_labels;
    }
    c.aggregation = pipeline::parse_aggregation_mode(aggregation);
    c.secure.fraction_bits = fraction_bits;
    c.secure.theta = theta;
    c.secure.reciprocal_shift = reciprocal_shift;
    c.secure.mode = active ? mpc::SecurityMode::Active : mpc::SecurityMode::Passive;
    c.processor = pipeline::parse_processor_mode(processor);
    c.qep.n_qubits = nq;
    c.qep.layers = layers;
    c.qep.scale = scale;
    c.qep.mode = qep::parse_observable_mode(observables);
    c.qep.seed = derive_seed(c.seed, "cli.qep");
    c.noise.kind = qsim::parse_noise_kind(noise);
    c.noise.p = p;
    c.noise.gamma_amp = gamma ? *gamma : gamma_amp;
    c.noise.gamma_phase = gamma ? *gamma : gamma_phase;
    c.alpha_bias = alpha_bias;
    c.criterion = pipeline::parse_threshold_criterion(criterion);
    c.training.steps = steps;
    c.training.learning_rate = lr;
    c.backend = serial ? Backend::Serial : Backend::OpenMP;
    c.validate();
    return c;
  }
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw UsageError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// ---- bench-mpc

struct BenchFlags {
  unsigned n_min = 1, n_max = 30, k = 64, theta = 5, fraction_bits = 20;
  std::string dims = "64,784";
  std::string strategy = "reciprocal-once";
  std::string out;
};

int run_bench(const BenchFlags& f) {
  bench::SweepRanges ranges;
  ranges.base.k = f.k;
  ranges.base.theta = f.theta;
  ranges.base.fraction_bits = f.fraction_bits;
  ranges.base.strategy = bench::parse_division_strategy(f.strategy);
  if (f.n_min < 1 || f.n_min > f.n_max) throw UsageError("--n-min must lie in [1, --n-max]");
  for (unsigned n = f.n_min; n <= f.n_max; ++n) ranges.n_values.push_back(n);
  ranges.d_values = parse_list<unsigned>(f.dims, "dimension");
  for (unsigned d : ranges.d_values) {
    bench::BenchConfig c = ranges.base;
    c.n = f.n_min;
    c.d = d;
    c.validate();
  }
  ranges.base.validate();

  const auto rows = bench::sweep(ranges);
  Output out(f.out);
  bench::write_csv(out.stream(), rows);

  std::ostream& table = out.to_stdout() ? std::cerr : std::cout;
  table << "# active security doubles every counter, client->node sharing included\n";
  table << "scenario  n   d      passive_bits        active_bits   ratio\n";
  for (const auto& r : rows) {
    const bench::Scenario s(r.scenario);
    if (s.security() != bench::SecurityLevel::Passive || r.scenario == 0) continue;
    if (r.config.n != f.n_min && r.config.n != f.n_max) continue;
    const auto active = bench::run_scenario(r.config, bench::Scenario(r.scenario + 3));
    table << std::setw(8) << ("S" + std::to_string(r.scenario)) << std::setw(4) << r.config.n << std::setw(4)
          << r.config.d << std::setw(18) << r.cost.total() << std::setw(19) << active.total() << std::setw(8)
          << std::fixed << std::setprecision(2)
          << static_cast<double>(active.total()) / static_cast<double>(r.cost.total()) << '\n';
    table.unsetf(std::ios::fixed);
  }
  return kExitOk;
}

// ---- encode

struct EncodeFlags {
  std::optional<std::uint64_t> seed;
  std::string frontend = "ttn";
  std::string images, labels;
  std::size_t synth = 16;
  std::string save_params, load_params;
  std::string out;
  bool serial = false;
};

int run_encode(const EncodeFlags& f) {
  const std::uint64_t seed = master_seed(f.seed);
  std::optional<tn::Frontend> frontend;
  if (!f.load_params.empty()) {
    frontend = tn::Frontend::load(f.load_params);
  } else {
    tn::FrontendConfig c;
    c.kind = tn::parse_frontend_kind(f.frontend);
    c.seed = seed;
    frontend.emplace(c);
  }
  pipeline::LabeledBatch batch;
  if (!f.images.empty()) {
    if (f.labels.empty()) throw UsageError("--images needs --labels");
    batch = pipeline::load_idx(f.images, f.labels);
  } else {
    if (f.synth < 2) throw UsageError("--synth needs at least 2 samples");
    batch = pipeline::synth_data(f.synth, derive_seed(seed, "cli.encode"));
  }
  const RMatrix z = frontend->encode_batch(batch.images, f.serial ? Backend::Serial : Backend::OpenMP);
  if (!f.save_params.empty()) frontend->save(f.save_params);

  Output out(f.out);
  auto& s = out.stream();
  s << "index,label";
  for (Eigen::Index j = 0; j < z.cols(); ++j) s << ",z" << j;
  s << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    s << i << ',' << batch.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < z.cols(); ++j) s << ',' << z(i, j);
    s << '\n';
  }
  return kExitOk;
}

// ---- qep-run

struct QepFlags {
  DemoFlags demo;
  std::size_t batch = 32;
  std::string save_params, load_params;
  std::string out;
  std::string features_out;
};

int run_qep(const QepFlags& f) {
  pipeline::DemoConfig c = f.demo.config();
  if (f.batch < 2) throw UsageError("--batch needs at least 2 samples");
  c.processor = pipeline::ProcessorMode::Quantum;
  c.data.synth_train = std::max<std::size_t>(f.batch, 10);
  c.data.synth_test = 2;
  c.validate();
  qep::QepParams params = f.load_params.empty() ? [&] {
    qep::QepConfig qc = c.qep;
    qc.d = c.frontend.d;
    return qep::QepParams::random(qc);
  }()
                                                 : qep::QepParams::load(f.load_params);
  if (params.config.n_qubits > qsim::kMaxDensityQubits && c.noise.kind != qsim::NoiseKind::Noiseless)
    throw UsageError("noisy simulation supports at most 10 qubits");
  if (c.alpha_bias) params.alpha_bias = *c.alpha_bias;

  const pipeline::PreparedFeatures features = pipeline::prepare_features(c);
  const RMatrix x = features.fit.topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(f.batch), features.fit.rows()));
  const auto result = qep::qep_forward_batch(x, params, c.noise, c.backend);
  if (!f.save_params.empty()) params.save(f.save_params);

  Output out(f.out);
  const qep::DiagnosticsRow row{"0", result.diagnostics, qsim::to_string(c.noise.kind), params.config.seed};
  qep::write_diagnostics_csv(out.stream(), std::span(&row, 1));
  if (!f.features_out.empty()) {
    std::ofstream fo(f.features_out);
    if (!fo) throw std::runtime_error("cannot open '" + f.features_out + "' for writing");
    fo << std::setprecision(17);
    for (Eigen::Index i = 0; i < result.f_out.rows(); ++i) {
      for (Eigen::Index j = 0; j < result.f_out.cols(); ++j) fo << (j ? "," : "") << result.f_out(i, j);
      fo << '\n';
    }
  }
  return kExitOk;
}

// ---- sweeps

struct SweepFlags {
  DemoFlags demo;
  std::string nq = "4,6,8,10,12,14,16";
  std::string noise_kinds = "noiseless,depolarizing,thermal,mixed";
  int noise_nq = 8;
  std::size_t seeds = 5;
  std::string out, summary_out;
};

void write_sweep(const SweepFlags& f, const std::vector<pipeline::SweepRecord>& records) {
  Output out(f.out);
  pipeline::write_sweep_csv(out.stream(), records);
  const auto summary = pipeline::summarize_sweep(records);
  if (!f.summary_out.empty()) {
    Output s(f.summary_out);
    pipeline::write_summary_csv(s.stream(), summary);
  } else {
    pipeline::write_summary_csv(out.to_stdout() ? std::cerr : std::cout, summary);
  }
}

int run_qubit_sweep(const SweepFlags& f) {
  if (f.seeds == 0) throw UsageError("--seeds must be at least 1");
  const auto nq = parse_list<int>(f.nq, "qubit count");
  for (int n : nq)
    if (n < 2 || n > 16) throw UsageError("--nq entries must lie in [2, 16], got " + std::to_string(n));
  pipeline::DemoConfig c = f.demo.config();
  for (int n : nq) {
    pipeline::DemoConfig probe = c;
    probe.qep.n_qubits = n;
    probe.validate();
  }
  const auto features = pipeline::prepare_features(c);
  write_sweep(f, pipeline::qubit_sweep(features, c, nq, f.seeds));
  return kExitOk;
}

int run_noise_sweep(const SweepFlags& f) {
  if (f.seeds == 0) throw UsageError("--seeds must be at least 1");
  std::vector<qsim::NoiseKind> kinds;
  for (const auto& name : split_names(f.noise_kinds)) kinds.push_back(qsim::parse_noise_kind(name));
  if (kinds.empty()) throw UsageError("empty --noise list");
  pipeline::DemoConfig c = f.demo.config();
  c.qep.n_qubits = f.noise_nq;
  for (auto k : kinds) {
    pipeline::DemoConfig probe = c;
    probe.noise.kind = k;
    probe.validate();
  }
  const auto features = pipeline::prepare_features(c);
  write_sweep(f, pipeline::noise_sweep(features, c, kinds, f.seeds));
  return kExitOk;
}

// ---- pipeline-demo

struct PipelineFlags {
  DemoFlags demo;
  std::string out;
};

int run_pipeline(const PipelineFlags& f) {
  const pipeline::DemoConfig c = f.demo.config();
  const auto result = pipeline::run_demo(c);
  Output out(f.out);
  out.stream() << pipeline::demo_report(c, result).dump(2) << '\n';
  return kExitOk;
}

// ---- verify

struct VerifyFlags {
  std::vector<std::string> groups;
  std::string params;
  std::optional<std::uint64_t> seed;
};

int run_verify(const VerifyFlags& f) {
  verify::VerifyOptions opt;
  opt.groups = f.groups;
  if (!f.params.empty()) opt.tn_params = f.params;
  opt.seed = master_seed(f.seed);
  const auto checks = verify::run_checks(opt);
  return verify::print_checks(std::cout, checks) ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-network encoders, replicated-sharing secure aggregation and a simulated quantum processor"};
  app.require_subcommand(1);

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench-mpc", "Communication cost of scenarios 0-6 over a grid");
  bench_cmd->add_option("--n-min", bench_flags.n_min, "Smallest client count")->capture_default_str();
  bench_cmd->add_option("--n-max", bench_flags.n_max, "Largest client count")->capture_default_str();
  bench_cmd->add_option("--dims", bench_flags.dims, "Comma-separated dimensions")->capture_default_str();
  bench_cmd->add_option("--k", bench_flags.k, "Ring bit width")->capture_default_str();
  bench_cmd->add_option("--theta", bench_flags.theta, "Goldschmidt iterations")->capture_default_str();
  bench_cmd->add_option("--fraction-bits", bench_flags.fraction_bits, "Fixed-point fraction bits")->capture_default_str();
  bench_cmd->add_option("--strategy", bench_flags.strategy, "reciprocal-once or per-element")->capture_default_str();
  bench_cmd->add_option("--out", bench_flags.out, "CSV path (stdout when omitted)");

  EncodeFlags encode_flags;
  auto* encode_cmd = app.add_subcommand("encode", "Encode images to latent features");
  encode_cmd->add_option("--seed", encode_flags.seed, "Master seed");
  encode_cmd->add_option("--frontend", encode_flags.frontend, "mps, ttn or mera")->capture_default_str();
  encode_cmd->add_option("--images", encode_flags.images, "IDX image file");
  encode_cmd->add_option("--labels", encode_flags.labels, "IDX label file");
  encode_cmd->add_option("--synth", encode_flags.synth, "Synthetic sample count")->capture_default_str();
  encode_cmd->add_option("--save-params", encode_flags.save_params, "Write the frontend parameter bundle");
  encode_cmd->add_option("--load-params", encode_flags.load_params, "Read a frontend parameter bundle");
  encode_cmd->add_option("--out", encode_flags.out, "CSV path (stdout when omitted)");
  encode_cmd->add_flag("--serial", encode_flags.serial, "Use the serial reference path");

  QepFlags qep_flags;
  auto* qep_cmd = app.add_subcommand("qep-run", "Run the quantum processor on aggregated synthetic latents");
  qep_flags.demo.add(qep_cmd, true);
  qep_cmd->add_option("--batch", qep_flags.batch, "Samples")->capture_default_str();
  qep_cmd->add_option("--save-params", qep_flags.save_params, "Write the processor parameter bundle");
  qep_cmd->add_option("--load-params", qep_flags.load_params, "Read a processor parameter bundle");
  qep_cmd->add_option("--out", qep_flags.out, "Diagnostics CSV path (stdout when omitted)");
  qep_cmd->add_option("--features-out", qep_flags.features_out, "CSV of refined features");

  SweepFlags qubit_flags;
  auto* qubit_cmd = app.add_subcommand("qubit-sweep", "Demo metrics across qubit counts and seeds");
  qubit_flags.demo.add(qubit_cmd, false);
  qubit_cmd->add_option("--nq", qubit_flags.nq, "Comma-separated qubit counts")->capture_default_str();
  qubit_cmd->add_option("--seeds", qubit_flags.seeds, "Processor seeds per qubit count")->capture_default_str();
  qubit_cmd->add_option("--out", qubit_flags.out, "Records CSV path (stdout when omitted)");
  qubit_cmd->add_option("--summary-out", qubit_flags.summary_out, "Summary CSV path");

  SweepFlags noise_flags;
  noise_flags.seeds = 3;
  auto* noise_cmd = app.add_subcommand("noise-sweep", "Demo metrics across noise models and seeds");
  noise_flags.demo.add(noise_cmd, false);
  noise_cmd->add_option("--nq", noise_flags.noise_nq, "Qubits")->capture_default_str();
  noise_cmd->add_option("--noise", noise_flags.noise_kinds, "Comma-separated noise kinds")->capture_default_str();
  noise_cmd->add_option("--seeds", noise_flags.seeds, "Processor seeds per noise kind")->capture_default_str();
  noise_cmd->add_option("--out", noise_flags.out, "Records CSV path (stdout when omitted)");
  noise_cmd->add_option("--summary-out", noise_flags.summary_out, "Summary CSV path");

  PipelineFlags pipeline_flags;
  auto* pipeline_cmd = app.add_subcommand("pipeline-demo", "Encode, aggregate, refine, classify; JSON report");
  pipeline_flags.demo.add(pipeline_cmd, true);
  pipeline_cmd->add_option("--out", pipeline_flags.out, "JSON path (stdout when omitted)");

  VerifyFlags verify_flags;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_option("--group", verify_flags.groups, "Only these groups (tn, mpc, qsim, bench, qep, pipeline)");
  verify_cmd->add_option("--params", verify_flags.params, "Frontend parameter bundle to check");
  verify_cmd->add_option("--seed", verify_flags.seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bench_cmd->parsed()) return run_bench(bench_flags);
    if (encode_cmd->parsed()) return run_encode(encode_flags);
    if (qep_cmd->parsed()) return run_qep(qep_flags);
    if (qubit_cmd->parsed()) return run_qubit_sweep(qubit_flags);
    if (noise_cmd->parsed()) return run_noise_sweep(noise_flags);
    if (pipeline_cmd->parsed()) return run_pipeline(pipeline_flags);
    if (verify_cmd->parsed()) return run_verify(verify_flags);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
