#include "barylab/kalton.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "barylab/barycenter.hpp"
#include "barylab/smalllp.hpp"
#include "barylab/spectral.hpp"

namespace barylab {

namespace {

int ipow5(int n) {
  int v = 1;
  for (int i = 0; i < n; ++i) v *= 5;
  return v;
}

Point vec_point(const Eigen::VectorXd& v) {
  return Point::vec(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd sphere_point(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (;;) {
    for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
    const double nrm = v.norm();
    if (nrm > 1e-12) return v / nrm;
  }
}

Eigen::VectorXd ball_point(Rng& rng, int n) {
  return sphere_point(rng, n) *
         std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
}

// Greedy farthest-point traversal of a candidate stream. Stops once the
// remaining fill distance drops to `target` or the net reaches `cap`.
// Chosen points are pairwise further than `target` apart by construction.
std::vector<int> farthest_point_net(const Eigen::MatrixXd& stream,
                                    double target, int cap, double* fill) {
  const int m = static_cast<int>(stream.cols());
  std::vector<int> picked;
  Eigen::VectorXd mind = Eigen::VectorXd::Constant(m, kInf);
  int next = 0;
  double far = kInf;
  while (static_cast<int>(picked.size()) < cap) {
    picked.push_back(next);
    mind = mind.cwiseMin(
        (stream.colwise() - stream.col(next)).colwise().norm().transpose());
    far = mind.maxCoeff(&next);
    if (far <= target) break;
  }
  *fill = far;
  return picked;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& Q) {
  std::vector<std::vector<double>> rows(Q.rows());
  for (int i = 0; i < Q.rows(); ++i) {
    rows[i].resize(Q.cols());
    for (int j = 0; j < Q.cols(); ++j) rows[i][j] = Q(i, j);
  }
  return rows;
}

Eigen::VectorXd min_l1_section(const std::vector<std::vector<double>>& Qrows,
                               const Eigen::VectorXd& v, double* obj,
                               double* gap) {
  const lp::Solution sol = lp::min_l1_preimage(
      Qrows, std::vector<double>(v.data(), v.data() + v.size()));
  ensure(sol.feasible && sol.optimal, "quotient preimage LP failed to solve");
  *obj = sol.objective;
  *gap = sol.gap;
  Eigen::VectorXd x(static_cast<int>(sol.x.size()));
  for (int i = 0; i < x.size(); ++i) x(i) = sol.x[i];
  return x;
}

}  // namespace

TargetSpace KaltonInstance::target() const {
  return TargetSpace::y_theta(Q, theta);
}

int KaltonInstance::point_index(const Eigen::VectorXd& a) const {
  for (int i = 0; i < a_size(); ++i)
    if ((a_pts[i] - a).norm() <= 1e-12) return i;
  return -1;
}

KaltonInstance build_instance(int n, double theta, std::uint64_t seed) {
  require(n >= 2 && n <= 8, "dimension must lie in [2, 8]");
  require(theta > 0 && theta <= 1, "theta must lie in (0, 1]");
  KaltonInstance inst;
  inst.n = n;
  inst.theta = theta;
  inst.sep_a = std::pow(static_cast<double>(n), -0.25);
  const int net_cap = ipow5(n);

  // candidate stream mixing interior and boundary points
  Rng net_rng(seed, 6);
  const int m_stream = std::min(30000 * n, 150000);
  Eigen::MatrixXd stream(n, m_stream);
  for (int k = 0; k < m_stream; ++k)
    stream.col(k) = k % 2 ? ball_point(net_rng, n) : sphere_point(net_rng, n);

  Rng cover_rng(seed, 7);
  bool covered = false;
  for (double eps = 0.5; eps >= 0.5 / 4 && !covered; eps /= 2) {
    inst.sep_net = eps;
    const std::vector<int> picked =
        farthest_point_net(stream, eps, net_cap, &inst.net_fill);
    inst.Q.resize(n, static_cast<int>(picked.size()));
    for (size_t j = 0; j < picked.size(); ++j)
      inst.Q.col(static_cast<int>(j)) = stream.col(picked[j]);

    inst.covering_max = 0;
    inst.lp_gap_max = 0;
    const std::vector<std::vector<double>> Qrows = to_rows(inst.Q);
    covered = true;
    for (int k = 0; k < 100; ++k) {
      double obj = 0, gap = 0;
      min_l1_section(Qrows, 0.5 * sphere_point(cover_rng, n), &obj, &gap);
      inst.covering_max = std::max(inst.covering_max, obj);
      inst.lp_gap_max = std::max(inst.lp_gap_max, gap);
      if (obj > 1 + 1e-9) {
        covered = false;  // densify the net and retry
        break;
      }
    }
  }
  ensure(covered, "half-ball covering failed after net densification");

  // symmetric separated sphere net, greedy over a fresh stream
  Rng a_rng(seed, 8);
  const int a_stream_len = 30000;
  Eigen::MatrixXd a_stream(n, a_stream_len);
  for (int k = 0; k < a_stream_len; ++k) a_stream.col(k) = sphere_point(a_rng, n);
  const int pair_cap = n >= 6 ? 2048 : 20000;
  for (int k = 0; k < a_stream_len; ++k) {
    if (static_cast<int>(inst.a_pts.size()) >= 2 * pair_cap) break;
    const Eigen::VectorXd a = a_stream.col(k);
    bool keep = true;
    for (const auto& b : inst.a_pts)
      if ((a - b).norm() <= inst.sep_a) {
        keep = false;
        break;
      }
    if (!keep) continue;
    inst.a_pts.push_back(a);
    inst.a_pts.push_back(-a);
  }
  inst.a_fill = 0;
  for (int k = 0; k < a_stream_len; ++k) {
    double best = kInf;
    for (const auto& b : inst.a_pts)
      best = std::min(best, (a_stream.col(k) - b).norm());
    inst.a_fill = std::max(inst.a_fill, best);
  }

  // antisymmetrized minimum-l1 sections
  const std::vector<std::vector<double>> Qrows = to_rows(inst.Q);
  inst.phi.resize(inst.a_pts.size());
  for (size_t k = 0; k + 1 < inst.a_pts.size(); k += 2) {
    double obj = 0, gap = 0;
    const Eigen::VectorXd xp =
        min_l1_section(Qrows, inst.a_pts[k], &obj, &gap);
    inst.lp_gap_max = std::max(inst.lp_gap_max, gap);
    const Eigen::VectorXd xm =
        min_l1_section(Qrows, inst.a_pts[k + 1], &obj, &gap);
    inst.lp_gap_max = std::max(inst.lp_gap_max, gap);
    inst.phi[k] = 0.5 * (xp - xm);
    inst.phi[k + 1] = -inst.phi[k];
  }

  validate_instance(inst);
  return inst;
}

void validate_instance(const KaltonInstance& inst) {
  require(inst.n >= 2 && inst.n <= 8, "dimension must lie in [2, 8]");
  require(inst.theta > 0 && inst.theta <= 1, "theta must lie in (0, 1]");
  const int N = inst.net_size();
  ensure(N >= 1 && N <= ipow5(inst.n), "net size must stay within 5^n");
  for (int j = 0; j < N; ++j)
    ensure(inst.Q.col(j).norm() <= 1 + 1e-12,
           "net column escapes the unit ball");
  const int na = inst.a_size();
  ensure(na >= 2 && na % 2 == 0, "sphere net must come in +/- pairs");
  ensure(inst.phi.size() == inst.a_pts.size(),
         "one section value per sphere-net point required");
  for (int i = 0; i < na; i += 2) {
    ensure((inst.a_pts[i] + inst.a_pts[i + 1]).norm() <= 1e-12,
           "sphere net is not symmetric");
    ensure((inst.phi[i] + inst.phi[i + 1]).norm() <= 1e-12,
           "section is not odd");
  }
  for (int i = 0; i < na; ++i) {
    ensure(std::abs(inst.a_pts[i].norm() - 1) <= 1e-12,
           "sphere-net point is off the sphere");
    ensure(inst.phi[i].lpNorm<1>() <= 2 + 1e-9, "section exceeds 2 B_1");
    ensure((inst.Q * inst.phi[i] - inst.a_pts[i]).cwiseAbs().maxCoeff() <=
               1e-9,
           "section fails Q phi(a) = a");
    for (int j = i + 1; j < na; ++j)
      ensure((inst.a_pts[i] - inst.a_pts[j]).norm() > inst.sep_a,
             "sphere net violates its separation");
  }
  ensure(inst.covering_max <= 1 + 1e-9, "sampled covering check failed");
  ensure(inst.lp_gap_max <= 1e-9, "an LP certificate has a large gap");
  ensure(inst.a_fill <= inst.sep_a + 1e-12,
         "sphere net is not maximal for its stream");
}

json kalton_to_json(const KaltonInstance& inst) {
  json a = json::array(), phi = json::array();
  for (const auto& v : inst.a_pts)
    a.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  for (const auto& v : inst.phi)
    phi.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  json q = json::array();
  for (int i = 0; i < inst.Q.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < inst.Q.cols(); ++j) row.push_back(inst.Q(i, j));
    q.push_back(row);
  }
  return json{{"n", inst.n},
              {"theta", inst.theta},
              {"sep_net", inst.sep_net},
              {"sep_a", inst.sep_a},
              {"net_size", inst.net_size()},
              {"a_size", inst.a_size()},
              {"covering_max", inst.covering_max},
              {"lp_gap_max", inst.lp_gap_max},
              {"net_fill", inst.net_fill},
              {"a_fill", inst.a_fill},
              {"Q", q},
              {"a_pts", a},
              {"phi", phi}};
}

YThetaPoint f_theta(const KaltonInstance& inst, const Eigen::VectorXd& a) {
  const int i = inst.point_index(a);
  if (i < 0) throw input_error("a is not a sphere-net point");
  return YThetaPoint{inst.phi[i], inst.Q * inst.phi[i]};
}

HolderReport holder_check(const KaltonInstance& inst, double tau) {
  require(tau >= inst.theta && tau <= 1, "tau must lie in [theta, 1]");
  HolderReport rep;
  rep.tau = tau;
  rep.bound = 4 + std::pow(2.0, 1 - tau);
  const TargetSpace Y = inst.target();
  const double dimfac =
      std::pow(static_cast<double>(inst.n), (tau - inst.theta) / 4.0);
  for (int i = 0; i < inst.a_size(); ++i)
    for (int j = i + 1; j < inst.a_size(); ++j) {
      const double num = Y.norm(inst.phi[i] - inst.phi[j]);
      const double den =
          dimfac * std::pow((inst.a_pts[i] - inst.a_pts[j]).norm(), tau);
      rep.max_ratio = std::max(rep.max_ratio, num / den);
    }
  ensure(rep.max_ratio <= rep.bound + 1e-9 * (1 + rep.bound),
         "Holder ratio exceeds its explicit constant");
  return rep;
}

LowerReport extension_lower_experiment(const KaltonInstance& inst, int extra,
                                       double tol, std::uint64_t seed) {
  require(inst.n <= 4, "extension experiment is limited to n <= 4");
  require(extra >= 0, "extra sample count must be nonnegative");
  Rng rng(seed, 10);
  std::vector<Point> S;
  std::vector<int> anchors;
  for (int i = 0; i < inst.a_size(); ++i) {
    S.push_back(vec_point(inst.a_pts[i]));
    anchors.push_back(i);
  }
  for (int k = 0; k < extra; ++k)
    S.push_back(vec_point(sphere_point(rng, inst.n)));
  const ExtensionInstance ext =
      make_instance(MetricSpace::euclidean(inst.n), std::move(S),
                    std::move(anchors), inst.target(), inst.phi);
  const ExtensionResult res = min_lipschitz_extension(ext, tol);
  LowerReport rep;
  rep.lip_f = ext.lip;
  rep.L = res.L;
  rep.ratio = ext.lip > 0 ? res.L / ext.lip : 1;
  rep.extra = extra;
  return rep;
}

double retraction_lip(const MetricSpace& s, const Retraction& rho) {
  require(rho.from.size() == rho.to.size() && !rho.from.empty(),
          "retraction table must pair inputs with images");
  double lip = 0;
  for (size_t i = 0; i < rho.from.size(); ++i)
    for (size_t j = i + 1; j < rho.from.size(); ++j) {
      const double dx = s.dist(rho.from[i], rho.from[j]);
      const double dy = s.dist(rho.to[i], rho.to[j]);
      if (dx <= 0) {
        if (dy > 1e-12) return kInf;
        continue;
      }
      lip = std::max(lip, dy / dx);
    }
  return lip;
}

namespace {

const Point& retraction_apply(const MetricSpace& s, const Retraction& rho,
                              const Point& q) {
  int best = -1;
  double bestd = kInf;
  for (size_t i = 0; i < rho.from.size(); ++i) {
    const double d = s.dist(rho.from[i], q);
    if (d < bestd) {
      bestd = d;
      best = static_cast<int>(i);
    }
  }
  require(best >= 0 && bestd <= 1e-9,
          "retraction table has no entry for a configuration point");
  return rho.to[best];
}

}  // namespace

CotypeCertificate retraction_transfer(const BarycentricMap& map,
                                      const ReversibleChain& c,
                                      const CotypeCertificate& cert,
                                      const Retraction& rho) {
  const int n = cert.n;
  require(c.size() == n, "certificate and chain sizes differ");
  require(static_cast<int>(cert.x.size()) == n &&
              static_cast<int>(cert.y.size()) == n,
          "certificate is missing its configuration");
  const MetricSpace& s = map.space;
  const double lip = retraction_lip(s, rho);
  CotypeCertificate out = cert;
  out.fast_path = false;
  for (int i = 0; i < n; ++i) {
    const Point& xr = retraction_apply(s, rho, cert.x[i]);
    require(s.dist(xr, cert.x[i]) <= 1e-9,
            "retraction must fix the configuration points");
    out.y[i] = retraction_apply(s, rho, cert.y[i]);
  }
  double lhs = 0;
  for (int i = 0; i < n; ++i)
    if (c.pi(i) > 0) lhs += c.pi(i) * powp(s.dist(cert.x[i], out.y[i]), cert.p);
  lhs += static_cast<double>(cert.t) *
         weighted_pair_energy(s, c.A, c.pi, out.y, cert.p);
  out.lhs = lhs;
  out.ratio = (lhs == 0 && cert.rhs_base == 0)
                  ? 1
                  : safe_ratio(lhs, cert.rhs_base);
  if (std::isfinite(lip)) {
    const double cap = powp(lip, cert.p) * cert.ratio;
    ensure(out.ratio <= cap + 1e-8 * (1 + cap),
           "retraction transfer exceeded its Lipschitz budget");
  }
  return out;
}

}  // namespace barylab
