#include "tnmpcqep/bench/scenario.hpp"

#include <ostream>
#include <random>

#include "tnmpcqep/common/errors.hpp"
#include "tnmpcqep/common/seed.hpp"
#include "tnmpcqep/mpc/session.hpp"

namespace tnmpcqep::bench {
namespace {

using mpc::SharedVector;
using ring::Word;

// Public smoothing term added to the total weight before normalization.
constexpr double kEpsilon = 1e-6;

std::uint64_t u64(unsigned v) { return v; }

CostReport passive_cost(const BenchConfig& cfg, Functionality f) {
  const std::uint64_t n = cfg.n, d = cfg.d;
  const std::uint64_t fmul = mpc::fixed_mul_cost_bits(cfg.k);
  const std::uint64_t div = mpc::div_cost_bits(cfg.k, cfg.theta);
  CostReport r;
  r.client_to_node_bits = n * (d + 1) * mpc::share_cost_bits(cfg.k);
  r.node_to_node_bits = n * d * fmul;
  if (f == Functionality::Aggregation) {
    r.reconstruction_bits = (d + 1) * mpc::open_cost_bits(cfg.k);
    return r;
  }
  r.node_to_node_bits += cfg.strategy == DivisionStrategy::ReciprocalOnce ? div + d * fmul : d * div;
  if (f == Functionality::Transformation) r.node_to_node_bits += d * d * fmul;
  r.reconstruction_bits = d * mpc::open_cost_bits(cfg.k);
  return r;
}

std::vector<std::size_t> repeat_index(std::size_t index, std::size_t count) {
  return std::vector<std::size_t>(count, index);
}

}  // namespace

std::string to_string(SecurityLevel level) {
  switch (level) {
    case SecurityLevel::Insecure: return "insecure";
    case SecurityLevel::Passive: return "passive";
    case SecurityLevel::Active: return "active";
  }
  return "?";
}

std::string to_string(Functionality f) {
  switch (f) {
    case Functionality::Aggregation: return "aggregation";
    case Functionality::Normalization: return "aggregation+normalization";
    case Functionality::Transformation: return "aggregation+normalization+transformation";
  }
  return "?";
}

std::string to_string(DivisionStrategy s) {
  return s == DivisionStrategy::ReciprocalOnce ? "reciprocal-once" : "per-element";
}

DivisionStrategy parse_division_strategy(const std::string& text) {
  if (text == "reciprocal-once") return DivisionStrategy::ReciprocalOnce;
  if (text == "per-element") return DivisionStrategy::PerElement;
  throw UsageError("unknown division strategy '" + text + "' (expected reciprocal-once or per-element)");
}

Scenario::Scenario(int id) : id_(id) {
  if (id < 0 || id >= kCount) throw UsageError("invalid scenario id " + std::to_string(id) + " (expected 0..6)");
}

SecurityLevel Scenario::security() const {
  if (id_ == 0) return SecurityLevel::Insecure;
  return id_ <= 3 ? SecurityLevel::Passive : SecurityLevel::Active;
}

Functionality Scenario::functionality() const {
  if (id_ == 0) return Functionality::Aggregation;
  switch ((id_ - 1) % 3) {
    case 0: return Functionality::Aggregation;
    case 1: return Functionality::Normalization;
    default: return Functionality::Transformation;
  }
}

Scenario Scenario::passive_counterpart() const { return Scenario(id_ >= 4 ? id_ - 3 : id_); }

std::string Scenario::label() const {
  return "S" + std::to_string(id_) + " (" + to_string(security()) + ", " + to_string(functionality()) + ")";
}

void BenchConfig::validate() const {
  if (n == 0) throw UsageError("bench: n must be at least 1");
  if (d == 0) throw UsageError("bench: d must be at least 1");
  if (theta == 0) throw UsageError("bench: theta must be at least 1");
  if (k < 8 || k > 64) throw UsageError("bench: k must be in [8, 64]");
}

CostReport run_scenario(const BenchConfig& cfg, Scenario s) {
  cfg.validate();
  if (s.security() == SecurityLevel::Insecure) {
    CostReport r;
    r.client_to_node_bits = u64(cfg.n) * (u64(cfg.d) + 1) * cfg.k;
    return r;
  }
  const CostReport passive = passive_cost(cfg, s.functionality());
  return s.security() == SecurityLevel::Active ? passive * 2 : passive;
}

CostReport execute_scenario(const BenchConfig& cfg, Scenario s, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = cfg.n, d = cfg.d;
  const mpc::FixedPointCodec codec(cfg.k, cfg.fraction_bits);
  const auto mode = s.security() == SecurityLevel::Active ? mpc::SecurityMode::Active : mpc::SecurityMode::Passive;
  mpc::Session session({cfg.k, mode, derive_seed(seed, "bench.session")});

  std::mt19937_64 rng(derive_seed(seed, "bench.data"));
  std::uniform_real_distribution<double> feature(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 2.0);

  if (s.security() == SecurityLevel::Insecure) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Word> words(d + 1);
      for (auto& w : words) w = ring::encode_fixed_word(feature(rng), codec);
      session.upload_plain(words);
    }
    return session.meter().report();
  }

  SharedVector wf(cfg.k, d);
  SharedVector total(cfg.k, 1);
  const auto broadcast = repeat_index(0, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> upload(d + 1);
    for (std::size_t j = 0; j < d; ++j) upload[j] = feature(rng);
    upload[d] = weight(rng);
    const SharedVector shared = session.share_fixed(upload, codec);
    const SharedVector f = shared.slice(0, d);
    const SharedVector w = shared.slice(d, 1);
    wf = session.secure_add(wf, session.fixed_mul(f, w.gather(broadcast), codec));
    total = session.secure_add(total, w);
  }

  if (s.functionality() == Functionality::Aggregation) {
    (void)session.reconstruct(wf.concat(total));
    return session.meter().report();
  }

  const SharedVector den = session.add_constant(total, ring::encode_fixed_word(kEpsilon, codec));
  SharedVector x;
  if (cfg.strategy == DivisionStrategy::ReciprocalOnce) {
    const SharedVector one = session.public_constant(ring::encode_fixed_word(1.0, codec), 1);
    const SharedVector recip = session.secure_div(one, den, codec, cfg.theta);
    x = session.fixed_mul(wf, recip.gather(broadcast), codec);
  } else {
    x = session.secure_div(wf, den.gather(broadcast), codec, cfg.theta);
  }

  if (s.functionality() == Functionality::Transformation) {
    std::uniform_real_distribution<double> entry(-0.5, 0.5);
    std::vector<Word> matrix(d * d);
    for (auto& m : matrix) m = ring::encode_fixed_word(entry(rng), codec);
    const SharedVector weights = session.dealer_share(matrix);
    std::vector<std::size_t> columns(d * d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) columns[r * d + c] = c;
    }
    const SharedVector products = session.fixed_mul(x.gather(columns), weights, codec);
    SharedVector y(cfg.k, d);
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<std::size_t> column_c(d);
      for (std::size_t r = 0; r < d; ++r) column_c[r] = r * d + c;
      y = session.secure_add(y, products.gather(column_c));
    }
    x = y;
  }
  (void)session.reconstruct(x);
  return session.meter().report();
}

bool verify_against_meter(const BenchConfig& cfg, Scenario s, std::uint64_t seed) {
  return execute_scenario(cfg, s, seed) == run_scenario(cfg, s);
}

std::vector<SweepRow> sweep(const SweepRanges& ranges, Backend backend) {
  std::vector<SweepRow> rows;
  for (int id : ranges.scenarios) {
    for (unsigned n : ranges.n_values) {
      for (unsigned d : ranges.d_values) {
        SweepRow row;
        row.scenario = Scenario(id).id();
        row.config = ranges.base;
        row.config.n = n;
        row.config.d = d;
        row.config.validate();
        rows.push_back(row);
      }
    }
  }
  const auto count = static_cast<std::ptrdiff_t>(rows.size());
  if (backend == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) rows[i].cost = run_scenario(rows[i].config, Scenario(rows[i].scenario));
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) rows[i].cost = run_scenario(rows[i].config, Scenario(rows[i].scenario));
  }
  return rows;
}

void write_csv_header(std::ostream& out) {
  out << "scenario,n,d,k,theta,strategy,client_to_node_bits,node_to_node_bits,reconstruction_bits,total_bits\n";
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
  write_csv_header(out);
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.config.n << ',' << r.config.d << ',' << r.config.k << ','
        << r.config.theta << ',' << to_string(r.config.strategy) << ',' << r.cost.client_to_node_bits << ','
        << r.cost.node_to_node_bits << ',' << r.cost.reconstruction_bits << ',' << r.cost.total() << '\n';
  }
}

}  // namespace tnmpcqep::bench
