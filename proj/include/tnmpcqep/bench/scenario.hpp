#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tnmpcqep/common/backend.hpp"
#include "tnmpcqep/mpc/meter.hpp"

namespace tnmpcqep::bench {

using mpc::CostReport;

enum class SecurityLevel { Insecure, Passive, Active };
enum class Functionality { Aggregation, Normalization, Transformation };
enum class DivisionStrategy { ReciprocalOnce, PerElement };

std::string to_string(SecurityLevel level);
std::string to_string(Functionality f);
std::string to_string(DivisionStrategy s);
DivisionStrategy parse_division_strategy(const std::string& text);

/// Scenario 0 is the plaintext baseline; 1-3 are passive, 4-6 their active
/// counterparts, each adding normalization and then a transformation stage.
class Scenario {
 public:
  static constexpr int kCount = 7;

  /// Throws UsageError for ids outside 0..6.
  explicit Scenario(int id);

  int id() const { return id_; }
  SecurityLevel security() const;
  Functionality functionality() const;
  /// The scenario with the same functionality under passive security.
  Scenario passive_counterpart() const;
  std::string label() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  int id_;
};

struct BenchConfig {
  unsigned n = 16;
  unsigned d = 64;
  unsigned k = 64;
  unsigned theta = 5;
  unsigned fraction_bits = 20;
  DivisionStrategy strategy = DivisionStrategy::ReciprocalOnce;

  /// Throws UsageError unless n, d, theta >= 1 and 8 <= k <= 64.
  void validate() const;
};

/// Closed-form cost of one aggregation round.
CostReport run_scenario(const BenchConfig& cfg, Scenario s);

/// Execute the scenario's protocol in-process on seeded synthetic client data
/// and return the meter's report.
CostReport execute_scenario(const BenchConfig& cfg, Scenario s, std::uint64_t seed = 0);

/// True iff the executed protocol's meter equals the closed form exactly.
bool verify_against_meter(const BenchConfig& cfg, Scenario s, std::uint64_t seed = 0);

struct SweepRanges {
  std::vector<int> scenarios{0, 1, 2, 3, 4, 5, 6};
  std::vector<unsigned> n_values;
  std::vector<unsigned> d_values{64, 784};
  BenchConfig base;
};

struct SweepRow {
  int scenario = 0;
  BenchConfig config;
  CostReport cost;
};

/// One row per (scenario, n, d), ordered scenario-major then n then d.
std::vector<SweepRow> sweep(const SweepRanges& ranges, Backend backend = Backend::OpenMP);

void write_csv_header(std::ostream& out);
void write_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace tnmpcqep::bench
