#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tnmpcqep/common/backend.hpp"
#include "tnmpcqep/common/bundle.hpp"
#include "tnmpcqep/common/dense.hpp"
#include "tnmpcqep/qep/observables.hpp"
#include "tnmpcqep/qsim/density.hpp"

namespace tnmpcqep::qep {

struct QepConfig {
  int d = 64;
  int n_qubits = 8;
  int layers = 2;
  double scale = 0.5;
  ObservableMode mode = ObservableMode::AllPairs;
  std::uint64_t seed = 0;

  void validate() const;
  int d_q() const { return observable_count(n_qubits, mode); }
};

/// Seeded-random processor weights. The quantum circuit itself has no
/// trainable parameters beyond the fixed offsets `delta`.
struct QepParams {
  QepConfig config;
  Linear encoder_in;     // d -> 2 N_q
  Linear encoder_out;    // 2 N_q -> 2 N_q
  Linear decoder_in;     // d_q -> d
  Linear decoder_out;    // d -> d
  Linear bypass;         // 2 N_q -> d
  Linear fusion;         // 2d -> d
  RVector alpha_weight;  // d
  double alpha_bias = 0.0;
  double beta = 0.5;          // in [0, 1]
  std::vector<double> delta;  // L x N_q x 2

  static QepParams random(const QepConfig& config);
  /// Throws UsageError on inconsistent shapes or beta outside [0, 1].
  void validate() const;

  ParamBundle to_bundle() const;
  /// beta is stored as a logit and mapped back through a sigmoid.
  static QepParams from_bundle(const ParamBundle& bundle);
  void save(const std::filesystem::path& path) const;
  static QepParams load(const std::filesystem::path& path);
};

struct AngleEncoding {
  RVector e;                  // 2 N_q
  std::vector<double> theta;  // L x N_q x 2, theta = pi s (e + delta)
};

AngleEncoding encode_angles(const RVector& x_agg, const QepParams& params);

/// Every intermediate of one forward pass.
struct QepTrace {
  AngleEncoding angles;
  RVector q_raw, q_dec, q_bp, q, z, f_out;
  double alpha = 0.0;
};

struct QepDiagnostics {
  double alpha_mean = 0.0;
  double q_std = 0.0;
  int n_q = 0;
  int d_q = 0;
  std::size_t batch = 0;
};

/// Observable readout of the circuit for given angles; noiseless uses the
/// statevector, other kinds the density matrix.
RVector quantum_readout(std::span<const double> theta, const QepParams& params, const qsim::NoiseSpec& noise,
                        Backend backend = Backend::Serial);

/// Throws NumericError naming the stage on a non-finite intermediate.
QepTrace qep_trace(const RVector& x_agg, const QepParams& params, const qsim::NoiseSpec& noise = {},
                   Backend backend = Backend::Serial);
RVector qep_forward(const RVector& x_agg, const QepParams& params, const qsim::NoiseSpec& noise = {},
                    QepDiagnostics* diagnostics = nullptr);

struct QepBatchResult {
  RMatrix f_out;  // rows = samples
  RMatrix q;
  RVector alpha;
  QepDiagnostics diagnostics;
};

/// Rows of `x` are samples. Samples are evaluated in parallel for the OpenMP
/// backend; each sample's result does not depend on the backend.
QepBatchResult qep_forward_batch(const RMatrix& x, const QepParams& params, const qsim::NoiseSpec& noise = {},
                                 Backend backend = Backend::OpenMP);

/// Mean of alpha and standard deviation over all (sample, coordinate) entries of q.
QepDiagnostics summarize(const RMatrix& q, const RVector& alpha, const QepConfig& config);

struct DiagnosticsRow {
  std::string batch_id;
  QepDiagnostics diagnostics;
  std::string noise_kind;
  std::uint64_t seed = 0;
};

/// Header "batch_id,n_q,d_q,alpha_mean,q_std,noise_kind,seed".
void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsRow> rows);

}  // namespace tnmpcqep::qep
