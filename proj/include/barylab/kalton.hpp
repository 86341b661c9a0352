#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "barylab/common.hpp"
#include "barylab/cotype.hpp"
#include "barylab/extension.hpp"
#include "barylab/metric.hpp"

namespace barylab {

// A quotient-of-l1 counterexample instance: a packing net of the unit
// ball (columns of Q), a separated symmetric sphere net, and the
// minimum-l1 section phi with Q phi(a) = a.
struct KaltonInstance {
  int n = 2;
  double theta = 1;
  double sep_net = 0.5;  // packing / covering target for the ball net
  double sep_a = 1;      // sphere-net separation n^(-1/4)
  Eigen::MatrixXd Q;     // n x N, columns in the unit ball
  std::vector<Eigen::VectorXd> a_pts;  // sphere net, in +/- pairs
  std::vector<Eigen::VectorXd> phi;    // section values, parallel to a_pts
  double covering_max = 0;  // worst sampled min-l1 preimage norm, v in half sphere
  double lp_gap_max = 0;    // worst LP duality gap encountered
  double net_fill = 0;      // farthest stream point from the net
  double a_fill = 0;        // farthest sphere-stream point from the sphere net

  int net_size() const { return static_cast<int>(Q.cols()); }
  int a_size() const { return static_cast<int>(a_pts.size()); }
  TargetSpace target() const;  // the composite-norm target space
  int point_index(const Eigen::VectorXd& a) const;  // -1 if absent
};

KaltonInstance build_instance(int n, double theta, std::uint64_t seed);
void validate_instance(const KaltonInstance& inst);
json kalton_to_json(const KaltonInstance& inst);

struct YThetaPoint {
  Eigen::VectorXd x;   // parameter vector
  Eigen::VectorXd qx;  // its quotient image Q x
};
YThetaPoint f_theta(const KaltonInstance& inst, const Eigen::VectorXd& a);

struct HolderReport {
  double tau = 1;
  double max_ratio = 0;  // over pairs: |f(a)-f(b)| / (n^((tau-theta)/4) |a-b|^tau)
  double bound = 0;      // 4 + 2^(1-tau)
};
HolderReport holder_check(const KaltonInstance& inst, double tau);

struct LowerReport {
  double lip_f = 0;  // Lipschitz constant of f on the sphere net
  double L = 0;      // minimal extension level found
  double ratio = 0;  // L / lip_f
  int extra = 0;     // added sphere sample points
};
LowerReport extension_lower_experiment(const KaltonInstance& inst, int extra,
                                       double tol, std::uint64_t seed);

// Pointwise retraction table; images must cover every queried point.
struct Retraction {
  std::vector<Point> from, to;
};
double retraction_lip(const MetricSpace& s, const Retraction& rho);
CotypeCertificate retraction_transfer(const BarycentricMap& map,
                                      const ReversibleChain& c,
                                      const CotypeCertificate& cert,
                                      const Retraction& rho);

}  // namespace barylab
