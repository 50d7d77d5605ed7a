#include "tnmpcqep/pipeline/report.hpp"

#include <string>

namespace tnmpcqep::pipeline {

using nlohmann::json;

json to_json(const EvalReport& r) {
  return {{"accuracy", r.accuracy},
          {"precision", {r.precision[0], r.precision[1]}},
          {"recall", {r.recall[0], r.recall[1]}},
          {"f1", {r.f1[0], r.f1[1]}},
          {"tau", r.tau},
          {"confusion", {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn}}}};
}

json to_json(const qep::QepDiagnostics& d) {
  return {{"n_q", d.n_q}, {"d_q", d.d_q}, {"alpha_mean", d.alpha_mean}, {"q_std", d.q_std}, {"batch", d.batch}};
}

json to_json(const mpc::CostReport& c) {
  return {{"client_to_node_bits", c.client_to_node_bits},
          {"node_to_node_bits", c.node_to_node_bits},
          {"reconstruction_bits", c.reconstruction_bits},
          {"total_bits", c.total()}};
}

json to_json(const qsim::NoiseSpec& n) {
  return {{"kind", qsim::to_string(n.kind)}, {"p", n.p}, {"gamma_amp", n.gamma_amp}, {"gamma_phase", n.gamma_phase}};
}

json config_json(const DemoConfig& c) {
  json data;
  if (c.data.uses_idx()) {
    data = {{"source", "idx"},
            {"train_images", c.data.train_images->string()},
            {"train_labels", c.data.train_labels ? c.data.train_labels->string() : ""},
            {"test_images", c.data.test_images ? c.data.test_images->string() : ""},
            {"test_labels", c.data.test_labels ? c.data.test_labels->string() : ""}};
  } else {
    data = {{"source", "synthetic"}, {"train", c.data.synth_train}, {"test", c.data.synth_test}};
  }
  json cfg = {
      {"seed", c.seed},
      {"data", data},
      {"clients", c.clients},
      {"client_weights", "fit sample counts"},
      {"frontend", {{"kind", tn::to_string(c.frontend.kind)}, {"d", c.frontend.d}}},
      {"aggregation", to_string(c.aggregation)},
      {"epsilon", c.secure.epsilon},
      {"processor", to_string(c.processor)},
      {"threshold_criterion", to_string(c.criterion)},
      {"validation_fraction", c.validation_fraction},
      {"readout", {{"steps", c.training.steps}, {"learning_rate", c.training.learning_rate}}},
      {"gate", c.gate ? "custom" : "identity"},
  };
  if (c.aggregation == AggregationMode::Secure) {
    cfg["mpc"] = {{"bits", c.secure.bits},
                  {"fraction_bits", c.secure.fraction_bits},
                  {"theta", c.secure.theta},
                  {"reciprocal_shift", c.secure.reciprocal_shift},
                  {"security", std::string(mpc::to_string(c.secure.mode))}};
  }
  if (c.processor == ProcessorMode::Quantum) {
    cfg["qep"] = {{"n_qubits", c.qep.n_qubits},
                  {"d_q", c.qep.d_q()},
                  {"layers", c.qep.layers},
                  {"scale", c.qep.scale},
                  {"observables", qep::to_string(c.qep.mode)},
                  {"seed", c.qep.seed}};
    cfg["noise"] = to_json(c.noise);
    if (c.alpha_bias) cfg["qep"]["alpha_bias_override"] = *c.alpha_bias;
  }
  return cfg;
}

json demo_report(const DemoConfig& config, const DemoResult& result) {
  json notes = json::array();
  notes.push_back("threshold chosen on the validation split by " + to_string(config.criterion));
  if (config.aggregation == AggregationMode::Secure) {
    notes.push_back("the aggregate is opened right after normalization, before the gate and the processor");
    if (config.secure.mode == mpc::SecurityMode::Active)
      notes.push_back("active security doubles every counter, client sharing included");
  }
  return {{"config", config_json(config)},
          {"sizes", {{"fit", result.fit_size}, {"validation", result.validation_size}, {"test", result.test_size}}},
          {"evaluation", to_json(result.test)},
          {"evaluation_at_half", to_json(result.test_default)},
          {"threshold", {{"tau", result.threshold.tau}, {"objective", result.threshold.objective}}},
          {"train_accuracy", result.train_accuracy},
          {"final_loss", result.final_loss},
          {"diagnostics", to_json(result.diagnostics)},
          {"cost", to_json(result.cost)},
          {"notes", notes}};
}

}  // namespace tnmpcqep::pipeline
