#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hyperem {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, deterministic
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct AcceptanceOptions {
  std::vector<int> criteria;       // empty: all twelve
  std::filesystem::path out_dir;   // empty: no artifacts written
};

/// Criterion numbers for a named suite: all, separatrix, exact, decay, zeros, sublinear,
/// functionals, euclidean, linear, rescale, determinism. Throws Validation for unknown names.
std::vector<int> suite_criteria(const std::string& suite);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 3 name: detail (1.23 s)".
std::string format_result(const CriterionResult& r);

}  // namespace hyperem
