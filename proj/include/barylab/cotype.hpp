#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barylab/barycenter.hpp"
#include "barylab/common.hpp"
#include "barylab/markov.hpp"
#include "barylab/metric.hpp"

namespace barylab {

// sum_ij pi_i M_ij d(x_i, x_j)^p
double weighted_pair_energy(const MetricSpace& s, const Eigen::MatrixXd& M,
                            const Eigen::VectorXd& pi,
                            const std::vector<Point>& x, double p);

// Layers of the collapsed barycenter recursion driven by row-stochastic B:
// layer 0 is x, layer r averages layer r-1 along the rows.
std::vector<std::vector<Point>> dp_layers(const BarycentricMap& map,
                                          const Eigen::MatrixXd& B,
                                          const std::vector<Point>& x, int t);
// y_i = barycenter of the first t layer values at i (layer 0 excluded).
std::vector<Point> cotype_y_from_layers(
    const BarycentricMap& map,
    const std::vector<std::vector<Point>>& layers);

struct CotypeCertificate {
  int n = 0;
  double p = 2;
  long long t = 1;
  double epsilon = 0;  // smoothing weight toward the stationary kernel
  bool fast_path = false;
  std::vector<Point> x, y;
  double lhs = 0;       // sum pi d(x,y)^p + t sum pi a d(y_i,y_j)^p
  double rhs_base = 0;  // sum pi Ces_t(A) d(x_i,x_j)^p
  double ratio = 1;     // lhs / rhs_base, 0/0 -> 1
};
// Builds y for the cotype inequality. Chains with zero transitions are
// smoothed to B = (1-eps) A + eps Pi before running the recursion; both
// sides are still evaluated on the original chain.
CotypeCertificate cotype_construct(const BarycentricMap& map,
                                   const ReversibleChain& c,
                                   const std::vector<Point>& x, double p,
                                   long long t);

// Finite filtered process: level 0 must be the trivial partition, atom ids
// nest across levels, Z is constant on atoms, and each level is the
// barycenter of the next one conditioned on its atoms.
struct MartingaleInstance {
  std::vector<double> mu;               // positive weights on Omega
  std::vector<std::vector<int>> atom;   // [level][omega] -> atom id
  std::vector<std::vector<Point>> Z;    // [level][omega]
  int levels() const { return static_cast<int>(atom.size()); }
  int omega_size() const { return static_cast<int>(mu.size()); }
};
void validate_martingale(const BarycentricMap& map,
                         const MartingaleInstance& m);

// K^p d(Z_0,z)^p + sum_l int d(Z_{l+1},Z_l)^p dmu - K^p int d(Z_m,z)^p dmu
double pisier_residual(const BarycentricMap& map, const MartingaleInstance& m,
                       const Point& z, double K, double p);

// Path-space martingale of the cotype recursion: level r conditions on the
// first r steps of the stationary trajectory.
MartingaleInstance dp_martingale(const BarycentricMap& map,
                                 const ReversibleChain& c,
                                 const std::vector<Point>& x, int t);

struct DominationReport {
  long long t = 1, t_ces = 1;
  double e_pow = 0, e_ces = 0, e_green = 0, e_ces_pt = 0;
  double pow_ratio = 0;    // e_pow / e_ces, asserted <= 2^p
  double green_ratio = 0;  // e_green / e_ces at ceil(p t)
  bool green_flag = false;
};
DominationReport domination_report(const MetricSpace& s,
                                   const ReversibleChain& c,
                                   const std::vector<Point>& x, double p,
                                   long long t);

struct BallCotypeResult {
  double lhs = 0;  // sum pi d(x,y)^p + (t-1) sum pi a d(y_i,y_j)^p
  double rhs = 0;  // sum pi B_t d(x_i,x_j)^p  (resolvent kernel)
  double ratio = 0;
};
BallCotypeResult ball_cotype_certificate(const MetricSpace& s,
                                         const ReversibleChain& c,
                                         const std::vector<Point>& x,
                                         const std::vector<Point>& y,
                                         double p, long long t);

struct PathCotypeResult {
  int n = 0;
  double p = 1;
  long long t = 1;
  double lhs_min = 0;
  double rhs = 0;
  double ratio = 0;
  std::string method;  // "lp" or "subgradient"
  std::vector<double> y;
};
// Lazy-endpoint path with x_i = i on the line; t = ceil(c n^e).
PathCotypeResult path_cotype_experiment(int n, double p, double tc = 1,
                                        double te = -1);

}  // namespace barylab
