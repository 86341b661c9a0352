#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "barylab/common.hpp"

namespace barylab {

// Row-stochastic chain in detailed balance with its stationary law pi.
struct ReversibleChain {
  Eigen::MatrixXd A;
  Eigen::VectorXd pi;
  int size() const { return static_cast<int>(A.rows()); }
};

ReversibleChain make_chain(Eigen::MatrixXd A, Eigen::VectorXd pi);
ReversibleChain make_symmetric_chain(Eigen::MatrixXd A);  // pi = uniform

// A^t by repeated squaring (t >= 0), rows renormalized against drift.
Eigen::MatrixXd chain_power(const ReversibleChain& c, long long t);

// (1/t) sum_{s=1..t} A^s.  `cesaro` multiplies out the sum; the spectral
// form evaluates the eigenvalue average in closed form and needs pi > 0.
Eigen::MatrixXd cesaro(const ReversibleChain& c, long long t);
Eigen::MatrixXd cesaro_spectral(const ReversibleChain& c, long long t);
Eigen::MatrixXd cesaro_auto(const ReversibleChain& c, long long t);

// (1/t) sum_{s=1..t} lambda^s, stable for lambda near 1 and huge t.
double cesaro_weight(double lambda, long long t);

struct GreenPair {
  Eigen::MatrixXd G;  // (1/t) (I - (1-1/t) A)^{-1}
  Eigen::MatrixXd B;  // G - I/t
};
GreenPair green(const ReversibleChain& c, long long t);

// Eigensystem of S = D^{1/2} A D^{-1/2} restricted to {i : pi_i > 0}.
struct SpectralDecomposition {
  std::vector<int> support;
  Eigen::VectorXd lambda;  // descending; lambda(0) = 1
  Eigen::MatrixXd U;       // orthonormal, S = U diag(lambda) U^T
  Eigen::VectorXd sqrt_pi; // on the support
};
SpectralDecomposition decompose(const ReversibleChain& c);

// max_{i>=2} |lambda_i| over the support; 0 for a single-atom support.
double absolute_gap(const ReversibleChain& c);

// kinds: path_holding, cycle, random_symmetric, random_reversible,
// regular_graph (params: {"d": degree, default 3})
ReversibleChain generate_chain(const std::string& kind, int n,
                               std::uint64_t seed,
                               const json& params = json::object());

json chain_to_json(const ReversibleChain& c);
// Accepts {"A":..., "pi"?:...} or {"generate":{"kind","n",...,"seed"?}}.
ReversibleChain chain_from_json(const json& j, std::uint64_t default_seed = 0);

}  // namespace barylab
