#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace curvkit::suites {

struct SuiteResult {
  int id = 0;
  std::string name;
  bool correct = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;

  bool passed() const { return correct && seconds <= budget_seconds; }
};

struct Suite {
  int id;
  std::string name;
  double budget_seconds;
  std::function<std::string(std::uint64_t seed, bool& ok)> body;
};

/// Randomized invariant suites with their runtime budgets, ids 1..10, plus
/// the file round-trip check (id 12).
const std::vector<Suite>& all_suites();

SuiteResult run_suite(const Suite& suite, std::uint64_t seed);
std::vector<SuiteResult> run_all(std::uint64_t seed);

/// One line: "[PASS] 3 theta-divisor model ... (0.41 s / 30 s) detail".
std::string format_result(const SuiteResult& r);

}  // namespace curvkit::suites
