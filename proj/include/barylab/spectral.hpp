#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barylab/barycenter.hpp"
#include "barylab/common.hpp"
#include "barylab/markov.hpp"
#include "barylab/metric.hpp"

namespace barylab {

// num/den with the conventions 0/0 = 0 and x/0 = inf for x > 0.
double safe_ratio(double num, double den);

// Poincare-type ratio of a two-sided configuration:
//   sum pi_i pi_j d(x_i,y_j)^p  /  sum pi_i a_ij d(x_i,y_j)^p
double gamma_plus_fixed(const MetricSpace& s, const ReversibleChain& c,
                        const std::vector<Point>& x,
                        const std::vector<Point>& y, double p);

// Exact value 1/(1 - gap) for Euclidean targets at p = 2.
double gamma_plus_analytic(const ReversibleChain& c);

struct GammaSearch {
  double gamma = 0;
  std::vector<Point> x, y;
  int restarts = 0;
};
// Coordinate-ascent maximization of the fixed ratio; Euclidean runs also
// seed one restart from the spectral witness.
GammaSearch gamma_plus_search(const MetricSpace& s, const ReversibleChain& c,
                              double p, int restarts, std::uint64_t seed);

struct MarkovTypeCheck {
  double lhs = 0;       // sum pi_i (A^t)_ij d(x_i,x_j)^p
  double rhs = 0;       // M^p t sum pi_i a_ij d(x_i,x_j)^p
  double residual = 0;  // lhs - rhs
};
MarkovTypeCheck markov_type_check(const MetricSpace& s,
                                  const ReversibleChain& c,
                                  const std::vector<Point>& x, double p,
                                  long long t, double M);

// (Tf)_i = barycenter of sum_j rows(i,j) delta_{f_j}
std::vector<Point> apply_markov_operator(const BarycentricMap& map,
                                         const Eigen::MatrixXd& rows,
                                         const std::vector<Point>& f);

double lpn_dist(const MetricSpace& s, const Eigen::VectorXd& pi,
                const std::vector<Point>& f, const std::vector<Point>& g,
                double p);

Point global_barycenter(const BarycentricMap& map, const Eigen::VectorXd& pi,
                        const std::vector<Point>& f);

struct LambdaEstimate {
  double lambda = 0;
  std::vector<Point> witness;
};
// Largest observed d(Tf, B(Tf)) / d(f, B f) over ascent restarts, where T
// averages along op_rows (A, a power, or a Cesaro average).
LambdaEstimate lambda_estimate(const BarycentricMap& map,
                               const ReversibleChain& c,
                               const Eigen::MatrixXd& op_rows, double p,
                               int restarts, std::uint64_t seed);

// Root of beta^p + K^p (beta-1)^p = K^p on [1, min(K, 2)].
double beta_p(double K, double p);

// beta_p(K) ((K^{2p} g - 1)/(K^{2p} g + K^p))^{1/p}
double lambda_bound_from_gamma(double gamma, double K, double p);

struct CalculusReport {
  double p = 2;
  long long t = 1;
  bool analytic = false;
  double gamma = 0;      // gamma_+(A)
  double gamma_ces = 0;  // gamma_+ of the Cesaro average at t
  double gamma_pow = 0;  // gamma_+(A^t)
  double lambda_bound = 0;
  double iterate_upper = 0;    // (G + 4(G+1)/(1 - lambda^{2t}))^p
  double cesaro_envelope = 0;  // 20 max(1, gamma/t)
  double utilization = 0;      // gamma_pow / iterate_upper
  std::vector<std::string> flags;
};
CalculusReport calculus_report(const MetricSpace& s, const ReversibleChain& c,
                               double p, long long t, double Gamma, double K,
                               int budget, std::uint64_t seed);
json calculus_to_json(const CalculusReport& r);

}  // namespace barylab
