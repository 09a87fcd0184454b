#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lsg {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;
  double seconds = 0.0;  // excluded from serialization
};

inline constexpr int kCriterionCount = 11;

/// Runs criterion `id` (1..10).
CriterionResult run_criterion(int id, std::uint64_t seed);

/// Criteria 1..10, then criterion 11 which reruns them and compares the
/// serialized outputs byte for byte.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

/// Deterministic text form of a result list (no timings).
std::string serialize(const std::vector<CriterionResult>& results);

/// Plain-text table with one row per criterion.
std::string summary_table(const std::vector<CriterionResult>& results);

/// "criterion N: PASS|FAIL <title> (<detail>)"
std::string status_line(const CriterionResult& result);

}  // namespace lsg
