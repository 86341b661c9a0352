#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "barylab/common.hpp"
#include "barylab/metric.hpp"

namespace barylab {

// Normed target for extension problems: plain Euclidean coordinates, or
// the l1/l2 composite ||x||_1 / n^(theta/4) + ||Q x||_2 on parameters.
struct TargetSpace {
  enum class Kind { Euclidean, YTheta };
  Kind kind = Kind::Euclidean;
  int dim = 0;        // coordinate / parameter dimension
  Eigen::MatrixXd Q;  // YTheta only
  double theta = 1;

  static TargetSpace euclidean(int dim);
  static TargetSpace y_theta(Eigen::MatrixXd Q, double theta);
  double norm(const Eigen::VectorXd& v) const;
  double dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return norm(a - b);
  }
  json to_json() const;
  static TargetSpace from_json(const json& j);
};

struct ExtensionInstance {
  MetricSpace X;
  std::vector<Point> S;
  std::vector<int> anchors;  // indices into S carrying f
  TargetSpace Y;
  std::vector<Eigen::VectorXd> f;  // parallel to anchors
  double lip = 0;                  // Lipschitz constant of f on the anchors
};

ExtensionInstance make_instance(MetricSpace X, std::vector<Point> S,
                                std::vector<int> anchors, TargetSpace Y,
                                std::vector<Eigen::VectorXd> f);
double lip_on_anchors(const ExtensionInstance& inst);  // kInf if forced
json instance_to_json(const ExtensionInstance& inst);
ExtensionInstance instance_from_json(const json& j);

// nearest-point rounding against a net, certified by the 3^p bound
struct RoundReport {
  std::vector<int> w;   // chosen net index per row
  double lhs_b = 0;     // sum pi_i b_ir d(w_i, z_r)^p
  double lhs_c = 0;     // sum pi_i c_ij d(w_i, w_j)^p
  double rhs_base = 0;  // sum (B^T Dpi C B)_rs d(z_r, z_s)^p
  double bound = 0;     // 3^p rhs_base
};
RoundReport round_core(const Eigen::MatrixXd& D, const Eigen::MatrixXd& B,
                       const Eigen::MatrixXd& C, const Eigen::VectorXd& pi,
                       double p);
RoundReport round_to_net(const MetricSpace& s, const std::vector<Point>& z,
                         const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                         const Eigen::VectorXd& pi, double p);

struct HCertificate {
  int n = 0, m = 0;
  double p = 2, M = 1, N = 1;
  double delta = 0, epsilon = 0;
  long long t = 2, tau = 1;
  double theta = 0;
  double lambda_cap = 0;  // (18^p / 3)(N^p + 1) M^p lip^p
  double lip = 0;
  Eigen::VectorXd pi;
  Eigen::MatrixXd B, A;
  std::vector<int> w;                // rounded anchor index per x
  std::vector<Eigen::VectorXd> y;
  RoundReport cn;
  double cotype_ratio = 1;
  double goal_lhs = 0;  // 2 sum W d_Y(y, f(z))^p + sum V d_Y(y_i, y_j)^p
  double goal_rhs = 0;  // lambda_cap (2 sum W d_X^p + sum V d_X^p + delta)
  double full_lhs = 0;  // L_H including the anchor-anchor block
  double full_rhs = 0;  // lambda_cap (R_H + delta)
  bool vacuous = false;
  bool pass = false;
};
json hcert_to_json(const HCertificate& h);

// Full pipeline for one weight matrix H (blocks U anchor-anchor, W
// cross, V free-free). Euclidean targets only. t_init = 0 picks the
// smallest admissible power of two.
HCertificate build_h_certificate(const ExtensionInstance& inst,
                                 const Eigen::MatrixXd& H, double p, double M,
                                 double N, long long t_init = 0,
                                 double delta = 0);

struct ExtensionResult {
  double L = 0;
  std::vector<Eigen::VectorXd> F;  // values on all of S
  double worst_violation = 0;      // max d_Y(F_a,F_b) - L d_X(a,b)
  int bisection_steps = 0;
  long long sweeps = 0;
};
// Smallest L (within tol) admitting F with d_Y(F_a, F_b) <= L d_X(a, b)
// everywhere and F = f on the anchors; bisection over cyclic projections.
ExtensionResult min_lipschitz_extension(const ExtensionInstance& inst,
                                        double tol);

// F(x) = min over anchors of f(s) + lip d_X(x, s); exact for Y = R.
std::vector<Eigen::VectorXd> mcshane_extend(const ExtensionInstance& inst);

}  // namespace barylab
