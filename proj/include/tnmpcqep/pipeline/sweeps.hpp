#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tnmpcqep/pipeline/demo.hpp"

namespace tnmpcqep::pipeline {

/// One demo evaluation inside a sweep. Runs share the prepared features of
/// the base configuration; only the processor settings and its seed vary.
struct SweepRecord {
  std::string condition;  // "quantum", "classical", or a noise kind
  int n_q = 0;            // 0 for the classical baseline
  int d_q = 0;
  std::size_t seed_index = 0;
  std::uint64_t seed = 0;  // processor seed
  qsim::NoiseSpec noise;
  DemoResult result;
  double runtime_seconds = 0.0;  // kept out of the CSV so outputs stay reproducible
};

/// Processor seed for sweep repetition `index`.
std::uint64_t sweep_seed(std::uint64_t master, std::size_t index);

/// One quantum record per (N_q, seed) followed by one classical baseline.
/// Throws UsageError on an empty list, N_q outside [2, 16], or seeds == 0.
std::vector<SweepRecord> qubit_sweep(const PreparedFeatures& features, const DemoConfig& base,
                                     std::span<const int> n_qubits, std::size_t seeds);

/// One record per (noise kind, seed) at base.qep.n_qubits, noise parameters
/// taken from base.noise. Throws UsageError for noisy kinds above the density
/// matrix limit.
std::vector<SweepRecord> noise_sweep(const PreparedFeatures& features, const DemoConfig& base,
                                     std::span<const qsim::NoiseKind> kinds, std::size_t seeds);

/// Header "condition,n_q,d_q,seed_index,seed,noise,p,gamma_amp,gamma_phase,
/// accuracy,precision_1,recall_1,f1_1,tau,accuracy_at_half,alpha_mean,q_std".
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

/// Five-number summary plus mean of the test accuracy per (condition, n_q).
struct SweepSummary {
  std::string condition;
  int n_q = 0;
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

std::vector<SweepSummary> summarize_sweep(std::span<const SweepRecord> records);
/// Header "condition,n_q,count,min,q1,median,q3,max,mean".
void write_summary_csv(std::ostream& out, std::span<const SweepSummary> rows);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace tnmpcqep::pipeline
