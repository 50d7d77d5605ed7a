#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/qep/observables.hpp"
#include "tnmpcqep/qep/processor.hpp"

using namespace tnmpcqep;
using namespace tnmpcqep::qep;

namespace {

RVector random_vector(std::mt19937_64& rng, int d, double sigma = 1.0) {
  std::normal_distribution<double> g(0.0, sigma);
  RVector x(d);
  for (auto& v : x) v = g(rng);
  return x;
}

QepParams params(int d = 64, int nq = 8, std::uint64_t seed = 1) {
  QepConfig c;
  c.d = d;
  c.n_qubits = nq;
  c.seed = seed;
  return QepParams::random(c);
}

}  // namespace

TEST_CASE("suggest_qubits") {
  CHECK(suggest_qubits(64) == 8);
  CHECK(suggest_qubits(1) == 1);
  CHECK(suggest_qubits(100) == 10);
  CHECK(suggest_qubits(65) == 9);
}

TEST_CASE("observable sets") {
  CHECK(observable_count(16, ObservableMode::NearestNeighbor) == 47);
  CHECK(observable_count(16, ObservableMode::AllPairs) == 152);
  CHECK(observable_set(16, ObservableMode::AllPairs).size() == 152);
  const auto t = observable_set(2, ObservableMode::NearestNeighbor);
  REQUIRE(t.size() == 5);
  CHECK(t[0].label() == "X0");
  CHECK(t[1].label() == "X1");
  CHECK(t[2].label() == "Z0");
  CHECK(t[3].label() == "Z1");
  CHECK(t[4].label() == "Z0Z1");
  const auto all = observable_set(4, ObservableMode::AllPairs);
  CHECK(all[8].label() == "Z0Z1");
  CHECK(all[9].label() == "Z0Z2");
  CHECK(all.back().label() == "Z2Z3");
  for (int n = 2; n <= 16; ++n) {
    CHECK(observable_count(n, ObservableMode::AllPairs) == 2 * n + n * (n - 1) / 2);
    CHECK(observable_count(n, ObservableMode::NearestNeighbor) == 3 * n - 1);
  }
}

TEST_CASE("angle encoding examples") {
  std::mt19937_64 rng(2);
  const RVector x = random_vector(rng, 64);
  QepParams p = params();
  p.config.scale = 0.0;
  for (double t : encode_angles(x, p).theta) CHECK(t == 0.0);

  p = params();
  p.encoder_out.weight.setZero();
  p.encoder_out.bias.setZero();
  std::fill(p.delta.begin(), p.delta.end(), 0.0);
  for (double t : encode_angles(x, p).theta) CHECK(t == 0.0);

  p.encoder_out.bias.setOnes();
  const auto enc = encode_angles(x, p);
  for (std::size_t i = 0; i < enc.theta.size(); i += 2) CHECK(std::abs(enc.theta[i] - M_PI / 2) <= 1e-15);

  // theta = pi s (e + delta) with y from e[2q] and z from e[2q + 1].
  p = params();
  const auto a = encode_angles(x, p);
  for (int l = 0; l < p.config.layers; ++l)
    for (int q = 0; q < p.config.n_qubits; ++q) {
      const std::size_t b = static_cast<std::size_t>((l * p.config.n_qubits + q) * 2);
      CHECK(std::abs(a.theta[b] - M_PI * 0.5 * (a.e(2 * q) + p.delta[b])) <= 1e-14);
      CHECK(std::abs(a.theta[b + 1] - M_PI * 0.5 * (a.e(2 * q + 1) + p.delta[b + 1])) <= 1e-14);
    }
  for (double d : p.delta) CHECK(std::abs(d) <= 0.25);
}

TEST_CASE("output interpolation endpoints") {
  std::mt19937_64 rng(3);
  const RVector x = random_vector(rng, 64);
  QepParams p = params();
  p.alpha_bias = -1e3;
  CHECK((qep_forward(x, p) - x).cwiseAbs().maxCoeff() <= 1e-9);
  p.alpha_bias = 1e3;
  const auto t = qep_trace(x, p);
  CHECK((t.f_out - t.z).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("branch mixing is convex") {
  std::mt19937_64 rng(4);
  const RVector x = random_vector(rng, 64);
  QepParams p = params();
  for (double beta : {0.0, 0.25, 0.5, 1.0}) {
    p.beta = beta;
    const auto t = qep_trace(x, p);
    CHECK((t.q - ((1 - beta) * t.q_dec + beta * t.q_bp)).cwiseAbs().maxCoeff() <= 1e-12);
    if (beta == 0.0) CHECK(t.q == t.q_dec);
    if (beta == 1.0) CHECK(t.q == t.q_bp);
  }
  // Recompute z and alpha independently.
  p.beta = 0.3;
  const auto t = qep_trace(x, p);
  RVector joined(128);
  joined << x, t.q;
  CHECK((t.z - (p.fusion.weight * joined + p.fusion.bias)).cwiseAbs().maxCoeff() <= 1e-12);
  const RVector centered = x.array() - x.mean();
  const RVector ln = centered / std::sqrt(centered.squaredNorm() / 64 + 1e-5);
  const double alpha = 1 / (1 + std::exp(-(p.alpha_weight.dot(ln) + p.alpha_bias)));
  CHECK(std::abs(t.alpha - alpha) <= 1e-12);
  CHECK((t.f_out - (alpha * t.z + (1 - alpha) * x)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("beta one makes the circuit inert") {
  std::mt19937_64 rng(5);
  const RVector x = random_vector(rng, 64);
  QepParams p = params();
  p.beta = 1.0;
  const RVector a = qep_forward(x, p);
  for (auto& d : p.delta) d += 0.2;
  CHECK((qep_forward(x, p) - a).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("readout bounds and determinism") {
  std::mt19937_64 rng(6);
  const QepParams p = params();
  for (int t = 0; t < 20; ++t) {
    const RVector x = random_vector(rng, 64, t % 2 ? 50.0 : 1.0);
    const auto tr = qep_trace(x, p);
    CHECK(tr.q_raw.size() == 44);
    CHECK(tr.q_raw.cwiseAbs().maxCoeff() <= 1.0);
  }
  const RVector x = random_vector(rng, 64);
  QepDiagnostics d1, d2;
  const RVector a = qep_forward(x, params(), {}, &d1);
  const RVector b = qep_forward(x, params(), {}, &d2);
  CHECK(a == b);
  CHECK(d1.alpha_mean == d2.alpha_mean);
  CHECK(d1.q_std == d2.q_std);
}

TEST_CASE("density readout at zero noise matches the statevector") {
  std::mt19937_64 rng(7);
  const RVector x = random_vector(rng, 64);
  const QepParams p = params();
  const RVector clean = qep_forward(x, p);
  for (auto kind : {qsim::NoiseKind::Depolarizing, qsim::NoiseKind::Thermal, qsim::NoiseKind::Mixed}) {
    const RVector noisy = qep_forward(x, p, {kind, 0.0, 0.0, 0.0});
    CHECK((noisy - clean).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("batch evaluation and diagnostics") {
  std::mt19937_64 rng(8);
  RMatrix x(9, 64);
  for (int i = 0; i < 9; ++i) x.row(i) = random_vector(rng, 64).transpose();
  const QepParams p = params();
  const auto serial = qep_forward_batch(x, p, {}, Backend::Serial);
  const auto par = qep_forward_batch(x, p, {}, Backend::OpenMP);
  CHECK(serial.f_out == par.f_out);
  for (int i = 0; i < 9; ++i) CHECK(serial.f_out.row(i).transpose() == qep_forward(x.row(i).transpose(), p));
  // q_std over every entry, alpha_mean over samples.
  const double mean = serial.q.mean();
  double var = 0;
  for (Eigen::Index i = 0; i < serial.q.size(); ++i) var += std::pow(serial.q.data()[i] - mean, 2);
  CHECK(std::abs(serial.diagnostics.q_std - std::sqrt(var / static_cast<double>(serial.q.size()))) <= 1e-12);
  CHECK(std::abs(serial.diagnostics.alpha_mean - serial.alpha.mean()) <= 1e-15);
  CHECK(serial.diagnostics.alpha_mean >= 0.0);
  CHECK(serial.diagnostics.alpha_mean <= 1.0);
  CHECK(serial.diagnostics.d_q == 44);
  CHECK_THROWS_AS(qep_forward_batch(RMatrix(0, 64), p), UsageError);

  std::ostringstream out;
  const DiagnosticsRow row{"b0", serial.diagnostics, "noiseless", 1};
  write_diagnostics_csv(out, std::span(&row, 1));
  CHECK(out.str().rfind("batch_id,n_q,d_q,alpha_mean,q_std,noise_kind,seed\nb0,8,44,", 0) == 0);
}

TEST_CASE("non-finite input is reported by stage") {
  RVector x = RVector::Zero(64);
  x(0) = NAN;
  try {
    qep_forward(x, params());
    FAIL("expected an error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("input") != std::string::npos);
  }
}

TEST_CASE("parameter bundles") {
  const auto path = std::filesystem::temp_directory_path() / "tnmpcqep_test_qep.qpb";
  QepParams p = params(16, 4, 9);
  p.beta = 0.3;
  p.save(path);
  const QepParams q = QepParams::load(path);
  CHECK(std::abs(q.beta - 0.3) <= 1e-15);
  CHECK(q.config.n_qubits == 4);
  std::mt19937_64 rng(10);
  const RVector x = random_vector(rng, 16);
  CHECK((qep_forward(x, p) - qep_forward(x, q)).cwiseAbs().maxCoeff() <= 1e-15);
  std::filesystem::remove(path);

  p.beta = 1.5;
  CHECK_THROWS_AS(p.validate(), UsageError);
  QepConfig bad;
  bad.n_qubits = 1;
  CHECK_THROWS_AS(QepParams::random(bad), UsageError);
}
