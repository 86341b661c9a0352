// Release gate: runs the eleven acceptance criteria and prints one line per
// criterion. Exit code is the number of failures.
#include <cstdio>

#include "barylab/verify.hpp"

int main() {
  const auto checks = barylab::acceptance_criteria(2026);
  int failures = 0;
  for (const auto& c : checks) {
    // three of the criteria carry wall-clock budgets (single-threaded)
    double budget = 0;
    if (c.id == 1) budget = 60.0;
    if (c.id == 7) budget = 300.0;
    if (c.id == 9) budget = 120.0;
    const bool in_time = budget <= 0 || c.seconds <= budget;
    const bool pass = c.pass && in_time;
    std::printf("[%s] %s -- %s (%.1fs%s)\n", pass ? "PASS" : "FAIL",
                c.name.c_str(), c.detail.c_str(), c.seconds,
                in_time ? "" : ", over budget");
    if (!pass) ++failures;
  }
  std::printf("%d/%d criteria passed\n",
              static_cast<int>(checks.size()) - failures,
              static_cast<int>(checks.size()));
  return failures;
}
