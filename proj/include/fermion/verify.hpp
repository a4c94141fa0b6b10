#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fermion::verify {

struct SuiteConfig {
  int m = 4;
  double hbar = 1.0;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::vector<std::string> suites;  // empty: run everything
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double residual = 0.0;   // worst observed residual (0 for exact passes)
  double threshold = 0.0;  // the limit it was held against
  double ms = 0.0;
};

const std::vector<std::string>& suite_names();

// Runs the selected suites; deterministic for a fixed config.
std::vector<CheckResult> run_suites(const SuiteConfig& cfg);

nlohmann::json report_json(const SuiteConfig& cfg, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace fermion::verify
