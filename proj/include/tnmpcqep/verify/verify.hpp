#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tnmpcqep::verify {

struct Check {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  /// Empty runs every group.
  std::vector<std::string> groups;
  /// Frontend parameter bundle to check in the tn group instead of a fresh
  /// seeded frontend.
  std::optional<std::filesystem::path> tn_params;
  std::uint64_t seed = 0;
};

/// tn, mpc, qsim, bench, qep, pipeline.
const std::vector<std::string>& group_names();

/// Throws UsageError on an unknown group name.
std::vector<Check> run_checks(const VerifyOptions& options);

/// One line per check and a pass/fail line per group. Returns true iff all passed.
bool print_checks(std::ostream& out, const std::vector<Check>& checks);

}  // namespace tnmpcqep::verify
