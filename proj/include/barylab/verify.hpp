#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barylab/common.hpp"

namespace barylab {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// The eleven release gates, in order. Each runs self-contained with
// derived seeds and reports a one-line summary.
std::vector<CheckResult> acceptance_criteria(std::uint64_t seed);

// Quick cross-module invariant spot checks (metric axioms, transport
// certificates, barycenter laws, snowflake displacement).
std::vector<CheckResult> module_invariants(std::uint64_t seed);

// module_invariants + acceptance_criteria.
std::vector<CheckResult> run_verify(std::uint64_t seed);

json checks_to_json(const std::vector<CheckResult>& checks);

}  // namespace barylab
