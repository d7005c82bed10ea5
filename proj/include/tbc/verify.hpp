#pragma once

#include <limits>
#include <string>
#include <vector>

namespace tbc {

/// One measured quantity of an acceptance check, accepted when lo <= value <= hi.
struct Metric {
  std::string name;
  double value = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool ok() const { return value >= lo && value <= hi; }
};

struct CheckResult {
  int id = 0;
  std::string name;
  std::vector<Metric> metrics;

  bool passed() const;
  /// "PASS  3 theta identities: symmetry 2.2e-16 <= 1e-12; ..."
  std::string summary() const;
};

inline constexpr int kAcceptanceCount = 12;

/// Runs acceptance check `id` (1..12). Exceptions thrown by the library are
/// reported as a failed metric named "error".
CheckResult run_check(int id);

std::vector<CheckResult> run_acceptance();

}  // namespace tbc
