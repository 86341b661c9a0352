#pragma once

#include <vector>

#include "barylab/common.hpp"

namespace barylab::lp {

struct Solution {
  bool optimal = false;
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> dual;  // y with A^T y <= c at optimality
  double gap = 0.0;          // |c'x - b'y|
  int iterations = 0;
};

// min c'x  subject to  A x = b, x >= 0.
// Dense two-phase tableau simplex with Bland's rule. Sized for desk-scale
// problems (hundreds of rows, a few thousand columns).
Solution solve_standard(const std::vector<std::vector<double>>& A,
                        const std::vector<double>& b,
                        const std::vector<double>& c, int max_iter = 200000);

// min ||x||_1 subject to Q x = v (x free). Returns x and the certified
// duality gap.
Solution min_l1_preimage(const std::vector<std::vector<double>>& Q,
                         const std::vector<double>& v);

}  // namespace barylab::lp
