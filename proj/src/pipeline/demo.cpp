#include "tnmpcqep/pipeline/demo.hpp"

#include <algorithm>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/pipeline/idx.hpp"
#include "tnmpcqep/tn/frontend.hpp"

namespace tnmpcqep::pipeline {
namespace {

struct DemoData {
  LabeledBatch fit, validation, test;
};

DemoData load_data(const DemoConfig& config) {
  LabeledBatch train, test;
  if (config.data.uses_idx()) {
    const auto& d = config.data;
    if (!d.train_labels || !d.test_images || !d.test_labels)
      throw UsageError("demo: IDX input needs train and test images and labels");
    train = load_idx(*d.train_images, *d.train_labels);
    test = load_idx(*d.test_images, *d.test_labels);
  } else {
    train = synth_data(config.data.synth_train, derive_seed(config.seed, "demo.train"), config.data.geometry);
    test = synth_data(config.data.synth_test, derive_seed(config.seed, "demo.test"), config.data.geometry);
  }
  Split split = stratified_split(train, config.validation_fraction, derive_seed(config.seed, "demo.validation"));
  return {std::move(split.first), std::move(split.second), std::move(test)};
}

std::span<const double> as_span(const RVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

std::string to_string(AggregationMode mode) { return mode == AggregationMode::Plain ? "plain" : "secure"; }
std::string to_string(ProcessorMode mode) { return mode == ProcessorMode::Classical ? "classical" : "quantum"; }

AggregationMode parse_aggregation_mode(const std::string& text) {
  if (text == "plain") return AggregationMode::Plain;
  if (text == "secure") return AggregationMode::Secure;
  throw UsageError("unknown aggregation mode '" + text + "' (expected plain or secure)");
}

ProcessorMode parse_processor_mode(const std::string& text) {
  if (text == "classical") return ProcessorMode::Classical;
  if (text == "quantum") return ProcessorMode::Quantum;
  throw UsageError("unknown processor mode '" + text + "' (expected classical or quantum)");
}

void DemoConfig::validate() const {
  if (clients < 1) throw UsageError("demo: need at least one client");
  if (!(validation_fraction > 0 && validation_fraction < 1)) throw UsageError("demo: validation fraction must lie in (0, 1)");
  if (!data.uses_idx() && (data.synth_train < 10 || data.synth_test < 2))
    throw UsageError("demo: synthetic task needs at least 10 training and 2 test samples");
  frontend.validate();
  if (processor == ProcessorMode::Quantum) {
    qep::QepConfig q = qep;
    q.d = frontend.d;
    q.validate();
    noise.validate();
    if (noise.kind != qsim::NoiseKind::Noiseless && q.n_qubits > qsim::kMaxDensityQubits)
      throw UsageError("demo: noisy simulation supports at most " + std::to_string(qsim::kMaxDensityQubits) + " qubits");
  }
  if (aggregation == AggregationMode::Secure) secure.validate();
}

std::uint64_t client_frontend_seed(std::uint64_t master, std::size_t client) {
  return derive_seed(derive_seed(master, "demo.clients"), client);
}

PreparedFeatures prepare_features(const DemoConfig& config) {
  config.validate();
  DemoData data = load_data(config);

  const auto parts = stratified_partition(data.fit.labels, config.clients);
  std::vector<double> weights(config.clients);
  for (std::size_t i = 0; i < config.clients; ++i) weights[i] = static_cast<double>(parts[i].size());

  // Every sample is encoded by every client's frontend; fit, validation and
  // test rows are stacked so one aggregation covers them all.
  const Eigen::Index m_fit = data.fit.images.rows(), m_val = data.validation.images.rows(),
                     m_test = data.test.images.rows();
  RMatrix images(m_fit + m_val + m_test, data.fit.images.cols());
  images << data.fit.images, data.validation.images, data.test.images;

  std::vector<RMatrix> latents(config.clients);
  for (std::size_t i = 0; i < config.clients; ++i) {
    tn::FrontendConfig fc = config.frontend;
    fc.seed = client_frontend_seed(config.seed, i);
    latents[i] = tn::Frontend(fc).encode_batch(images, config.backend);
  }

  PreparedFeatures out;
  RMatrix agg;
  if (config.aggregation == AggregationMode::Plain) {
    agg = aggregate_plain_batch(latents, weights, config.secure.epsilon);
  } else {
    AggregationConfig ac = config.secure;
    ac.seed = derive_seed(config.seed, "demo.mpc");
    SecureAggregate s = aggregate_secure_batch(latents, weights, ac);
    agg = std::move(s.x);
    out.cost = s.cost;
  }
  out.fit = agg.topRows(m_fit);
  out.validation = agg.middleRows(m_fit, m_val);
  out.test = agg.bottomRows(m_test);
  out.fit_labels = std::move(data.fit.labels);
  out.validation_labels = std::move(data.validation.labels);
  out.test_labels = std::move(data.test.labels);
  out.client_weights = std::move(weights);
  return out;
}

DemoResult finish_demo(const PreparedFeatures& features, const DemoConfig& config) {
  config.validate();
  const Eigen::Index m_fit = features.fit.rows(), m_val = features.validation.rows(), m_test = features.test.rows();
  RMatrix x(m_fit + m_val + m_test, features.fit.cols());
  x << features.fit, features.validation, features.test;
  if (config.gate) {
    x = config.gate(x);
    if (x.rows() != m_fit + m_val + m_test) throw UsageError("demo: gate hook changed the sample count");
  }

  DemoResult result;
  if (config.processor == ProcessorMode::Quantum) {
    qep::QepConfig qc = config.qep;
    qc.d = static_cast<int>(x.cols());
    qep::QepParams params = qep::QepParams::random(qc);
    if (config.alpha_bias) params.alpha_bias = *config.alpha_bias;
    qep::QepBatchResult q = qep::qep_forward_batch(x, params, config.noise, config.backend);
    x = std::move(q.f_out);
    result.diagnostics = qep::summarize(q.q.bottomRows(m_test), q.alpha.tail(m_test), qc);
  }

  const Standardizer standardizer = Standardizer::fit(x.topRows(m_fit));
  const RMatrix fit = standardizer.apply(x.topRows(m_fit));
  const RMatrix val = standardizer.apply(x.middleRows(m_fit, m_val));
  const RMatrix test = standardizer.apply(x.bottomRows(m_test));

  const auto weights = balanced_class_weights(features.fit_labels);
  const TrainedReadout trained = train_readout(fit, features.fit_labels, weights, config.training);

  const RVector fit_scores = trained.readout.scores(fit);
  const RVector val_scores = trained.readout.scores(val);
  const RVector test_scores = trained.readout.scores(test);

  result.threshold = select_threshold(as_span(val_scores), features.validation_labels, config.criterion);
  result.test = evaluate(as_span(test_scores), features.test_labels, result.threshold.tau);
  result.test_default = evaluate(as_span(test_scores), features.test_labels, 0.5);
  result.train_accuracy = evaluate(as_span(fit_scores), features.fit_labels, 0.5).accuracy;
  result.final_loss = trained.loss_history.back();
  result.cost = features.cost;
  result.fit_size = static_cast<std::size_t>(m_fit);
  result.validation_size = static_cast<std::size_t>(m_val);
  result.test_size = static_cast<std::size_t>(m_test);
  return result;
}

DemoResult run_demo(const DemoConfig& config) { return finish_demo(prepare_features(config), config); }

}  // namespace tnmpcqep::pipeline
