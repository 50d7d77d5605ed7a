#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tnmpcqep/common/backend.hpp"
#include "tnmpcqep/mpc/meter.hpp"
#include "tnmpcqep/pipeline/aggregation.hpp"
#include "tnmpcqep/pipeline/data.hpp"
#include "tnmpcqep/pipeline/metrics.hpp"
#include "tnmpcqep/pipeline/readout.hpp"
#include "tnmpcqep/qep/processor.hpp"
#include "tnmpcqep/tn/params.hpp"

namespace tnmpcqep::pipeline {

enum class AggregationMode { Plain, Secure };
enum class ProcessorMode { Classical, Quantum };

std::string to_string(AggregationMode mode);
std::string to_string(ProcessorMode mode);
AggregationMode parse_aggregation_mode(const std::string& text);
ProcessorMode parse_processor_mode(const std::string& text);

/// Either a synthetic task or four IDX files.
struct DataSource {
  std::size_t synth_train = 400;
  std::size_t synth_test = 100;
  SynthGeometry geometry;
  std::optional<std::filesystem::path> train_images, train_labels, test_images, test_labels;

  bool uses_idx() const { return train_images.has_value(); }
};

/// Applied to the aggregated features before the processor; identity by default.
using GateHook = std::function<RMatrix(const RMatrix&)>;

struct DemoConfig {
  DataSource data;
  std::size_t clients = 16;
  tn::FrontendConfig frontend;  // frontend.seed is ignored; clients derive theirs from `seed`
  AggregationMode aggregation = AggregationMode::Plain;
  AggregationConfig secure;
  ProcessorMode processor = ProcessorMode::Quantum;
  qep::QepConfig qep;  // qep.d follows frontend.d
  qsim::NoiseSpec noise;
  /// When set, replaces the processor's alpha gate bias (a large negative
  /// value drives alpha to 0).
  std::optional<double> alpha_bias;
  GateHook gate;
  ReadoutTraining training;
  ThresholdCriterion criterion = ThresholdCriterion::Youden;
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
  Backend backend = Backend::OpenMP;

  /// Throws UsageError on invalid settings.
  void validate() const;
};

/// Aggregated latents for the fit, validation and test splits, reused across
/// processor settings by the sweeps.
struct PreparedFeatures {
  RMatrix fit, validation, test;  // rows = samples
  std::vector<int> fit_labels, validation_labels, test_labels;
  std::vector<double> client_weights;
  mpc::CostReport cost;  // zero for plain aggregation
};

struct DemoResult {
  EvalReport test;          // at the selected threshold
  EvalReport test_default;  // at tau = 0.5
  ThresholdChoice threshold;
  double train_accuracy = 0.0;
  double final_loss = 0.0;
  qep::QepDiagnostics diagnostics;  // over the test split; zeros in classical mode
  mpc::CostReport cost;
  std::size_t fit_size = 0, validation_size = 0, test_size = 0;
};

/// Loads or synthesizes the data, splits off validation, partitions the fit
/// split across clients, encodes every sample with each client's frontend
/// and aggregates per sample with weights equal to the clients' fit counts.
PreparedFeatures prepare_features(const DemoConfig& config);

/// Gate hook, processor (or bypass), standardization, readout training,
/// threshold selection on validation and evaluation on test.
DemoResult finish_demo(const PreparedFeatures& features, const DemoConfig& config);

DemoResult run_demo(const DemoConfig& config);

/// Seed of client `i`'s frontend.
std::uint64_t client_frontend_seed(std::uint64_t master, std::size_t client);

}  // namespace tnmpcqep::pipeline
