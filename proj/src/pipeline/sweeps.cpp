#include "tnmpcqep/pipeline/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"

namespace tnmpcqep::pipeline {
namespace {

SweepRecord timed_run(const PreparedFeatures& features, const DemoConfig& config) {
  SweepRecord r;
  const auto t0 = std::chrono::steady_clock::now();
  r.result = finish_demo(features, config);
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.noise = config.noise;
  return r;
}

void check_seeds(std::size_t seeds) {
  if (seeds == 0) throw UsageError("sweep: need at least one seed");
}

}  // namespace

std::uint64_t sweep_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(derive_seed(master, "sweep.qep"), index);
}

std::vector<SweepRecord> qubit_sweep(const PreparedFeatures& features, const DemoConfig& base,
                                     std::span<const int> n_qubits, std::size_t seeds) {
  if (n_qubits.empty()) throw UsageError("qubit sweep: empty qubit list");
  if (features.fit.rows() == 0) throw UsageError("qubit sweep: empty batch");
  check_seeds(seeds);
  for (int n : n_qubits)
    if (n < 2 || n > 16) throw UsageError("qubit sweep: N_q must lie in [2, 16], got " + std::to_string(n));

  std::vector<SweepRecord> out;
  for (int n : n_qubits) {
    for (std::size_t s = 0; s < seeds; ++s) {
      DemoConfig cfg = base;
      cfg.processor = ProcessorMode::Quantum;
      cfg.qep.n_qubits = n;
      cfg.qep.seed = sweep_seed(base.seed, s);
      SweepRecord r = timed_run(features, cfg);
      r.condition = "quantum";
      r.n_q = n;
      r.d_q = cfg.qep.d_q();
      r.seed_index = s;
      r.seed = cfg.qep.seed;
      out.push_back(std::move(r));
    }
  }
  DemoConfig cfg = base;
  cfg.processor = ProcessorMode::Classical;
  SweepRecord r = timed_run(features, cfg);
  r.condition = "classical";
  r.noise = {};
  out.push_back(std::move(r));
  return out;
}

std::vector<SweepRecord> noise_sweep(const PreparedFeatures& features, const DemoConfig& base,
                                     std::span<const qsim::NoiseKind> kinds, std::size_t seeds) {
  if (kinds.empty()) throw UsageError("noise sweep: empty noise list");
  check_seeds(seeds);
  for (auto k : kinds)
    if (k != qsim::NoiseKind::Noiseless && base.qep.n_qubits > qsim::kMaxDensityQubits)
      throw UsageError("noise sweep: noisy simulation supports at most " + std::to_string(qsim::kMaxDensityQubits) +
                       " qubits");

  std::vector<SweepRecord> out;
  for (auto k : kinds) {
    for (std::size_t s = 0; s < seeds; ++s) {
      DemoConfig cfg = base;
      cfg.processor = ProcessorMode::Quantum;
      cfg.noise.kind = k;
      cfg.qep.seed = sweep_seed(base.seed, s);
      SweepRecord r = timed_run(features, cfg);
      r.condition = qsim::to_string(k);
      r.n_q = cfg.qep.n_qubits;
      r.d_q = cfg.qep.d_q();
      r.seed_index = s;
      r.seed = cfg.qep.seed;
      out.push_back(std::move(r));
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << "condition,n_q,d_q,seed_index,seed,noise,p,gamma_amp,gamma_phase,accuracy,precision_1,recall_1,f1_1,tau,"
         "accuracy_at_half,alpha_mean,q_std\n";
  const auto old = out.precision(10);
  for (const auto& r : records) {
    const auto& t = r.result.test;
    out << r.condition << ',' << r.n_q << ',' << r.d_q << ',' << r.seed_index << ',' << r.seed << ','
        << qsim::to_string(r.noise.kind) << ',' << r.noise.p << ',' << r.noise.gamma_amp << ',' << r.noise.gamma_phase
        << ',' << t.accuracy << ',' << t.precision[1] << ',' << t.recall[1] << ',' << t.f1[1] << ',' << t.tau << ','
        << r.result.test_default.accuracy << ',' << r.result.diagnostics.alpha_mean << ','
        << r.result.diagnostics.q_std << '\n';
  }
  out.precision(old);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw UsageError("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<SweepSummary> summarize_sweep(std::span<const SweepRecord> records) {
  // Keep first-appearance order of the conditions.
  std::vector<std::pair<std::string, int>> order;
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.condition, r.n_q);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(r.result.test.accuracy);
  }
  std::vector<SweepSummary> out;
  for (const auto& key : order) {
    auto v = groups[key];
    std::sort(v.begin(), v.end());
    SweepSummary s{key.first, key.second, v.size()};
    s.min = v.front();
    s.q1 = quantile_sorted(v, 0.25);
    s.median = quantile_sorted(v, 0.5);
    s.q3 = quantile_sorted(v, 0.75);
    s.max = v.back();
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const SweepSummary> rows) {
  out << "condition,n_q,count,min,q1,median,q3,max,mean\n";
  const auto old = out.precision(10);
  for (const auto& s : rows)
    out << s.condition << ',' << s.n_q << ',' << s.count << ',' << s.min << ',' << s.q1 << ',' << s.median << ','
        << s.q3 << ',' << s.max << ',' << s.mean << '\n';
  out.precision(old);
}

}  // namespace tnmpcqep::pipeline
