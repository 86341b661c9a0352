#include "barylab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "barylab/barycenter.hpp"
#include "barylab/cotype.hpp"
#include "barylab/markov.hpp"

namespace barylab {

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "expected a nonempty numeric array");
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "expected a matrix as array of rows");
  const int rows = static_cast<int>(j.size());
  Eigen::VectorXd first = vec_from_json(j.at(0));
  Eigen::MatrixXd m(rows, first.size());
  m.row(0) = first;
  for (int i = 1; i < rows; ++i) {
    Eigen::VectorXd r = vec_from_json(j.at(i));
    require(r.size() == m.cols(), "ragged matrix rows");
    m.row(i) = r;
  }
  return m;
}

}  // namespace

TargetSpace TargetSpace::euclidean(int dim) {
  require(dim >= 1, "target dimension must be positive");
  TargetSpace t;
  t.kind = Kind::Euclidean;
  t.dim = dim;
  return t;
}

TargetSpace TargetSpace::y_theta(Eigen::MatrixXd Q, double theta) {
  require(Q.rows() >= 1 && Q.cols() >= 1, "Q must be nonempty");
  require(theta > 0 && theta <= 1, "theta must lie in (0, 1]");
  TargetSpace t;
  t.kind = Kind::YTheta;
  t.dim = static_cast<int>(Q.cols());
  t.Q = std::move(Q);
  t.theta = theta;
  return t;
}

double TargetSpace::norm(const Eigen::VectorXd& v) const {
  require(v.size() == dim, "vector dimension mismatch in target space");
  if (kind == Kind::Euclidean) return v.norm();
  const double scale = std::pow(static_cast<double>(Q.rows()), theta / 4.0);
  return v.lpNorm<1>() / scale + (Q * v).norm();
}

json TargetSpace::to_json() const {
  if (kind == Kind::Euclidean) return json{{"kind", "euclidean"}, {"dim", dim}};
  return json{{"kind", "y_theta"}, {"theta", theta}, {"Q", mat_to_json(Q)}};
}

TargetSpace TargetSpace::from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean")
    return TargetSpace::euclidean(j.at("dim").get<int>());
  if (kind == "y_theta")
    return TargetSpace::y_theta(mat_from_json(j.at("Q")),
                                j.at("theta").get<double>());
  throw input_error("unknown target kind: " + kind);
}

double lip_on_anchors(const ExtensionInstance& inst) {
  const int m = static_cast<int>(inst.anchors.size());
  double lip = 0;
  for (int r = 0; r < m; ++r)
    for (int s = r + 1; s < m; ++s) {
      const double dx =
          inst.X.dist(inst.S[inst.anchors[r]], inst.S[inst.anchors[s]]);
      const double dy = inst.Y.dist(inst.f[r], inst.f[s]);
      if (dx <= 0) {
        if (dy > 0) return kInf;
        continue;
      }
      lip = std::max(lip, dy / dx);
    }
  return lip;
}

ExtensionInstance make_instance(MetricSpace X, std::vector<Point> S,
                                std::vector<int> anchors, TargetSpace Y,
                                std::vector<Eigen::VectorXd> f) {
  require(!S.empty(), "instance needs at least one point");
  require(!anchors.empty(), "instance needs at least one anchor");
  require(anchors.size() == f.size(), "one value per anchor required");
  std::vector<bool> seen(S.size(), false);
  for (const int a : anchors) {
    require(a >= 0 && a < static_cast<int>(S.size()), "anchor out of range");
    require(!seen[a], "duplicate anchor index");
    seen[a] = true;
  }
  ExtensionInstance inst;
  inst.X = std::move(X);
  inst.S.reserve(S.size());
  for (const auto& pt : S) {
    inst.X.check_point(pt);
    inst.S.push_back(inst.X.canonical(pt));
  }
  inst.anchors = std::move(anchors);
  inst.Y = std::move(Y);
  for (const auto& v : f)
    require(v.size() == inst.Y.dim, "value dimension mismatch");
  inst.f = std::move(f);
  inst.lip = lip_on_anchors(inst);
  return inst;
}

json instance_to_json(const ExtensionInstance& inst) {
  json pts = json::array();
  for (const auto& pt : inst.S) pts.push_back(inst.X.point_to_json(pt));
  json fv = json::array();
  for (const auto& v : inst.f) fv.push_back(vec_to_json(v));
  return json{{"space", inst.X.to_json()}, {"points", pts},
              {"anchors", inst.anchors},  {"target", inst.Y.to_json()},
              {"f", fv},                  {"lip", num_or_inf(inst.lip)}};
}

ExtensionInstance instance_from_json(const json& j) {
  MetricSpace X = MetricSpace::from_json(j.at("space"));
  std::vector<Point> S;
  for (const auto& pj : j.at("points")) S.push_back(X.point_from_json(pj));
  std::vector<int> anchors = j.at("anchors").get<std::vector<int>>();
  TargetSpace Y = TargetSpace::from_json(j.at("target"));
  std::vector<Eigen::VectorXd> f;
  for (const auto& vj : j.at("f")) f.push_back(vec_from_json(vj));
  return make_instance(std::move(X), std::move(S), std::move(anchors),
                       std::move(Y), std::move(f));
}

RoundReport round_core(const Eigen::MatrixXd& D, const Eigen::MatrixXd& B,
                       const Eigen::MatrixXd& C, const Eigen::VectorXd& pi,
                       double p) {
  const int m = static_cast<int>(D.rows());
  const int n = static_cast<int>(B.rows());
  require(p >= 1, "exponent p must be >= 1");
  require(m >= 1 && D.cols() == m, "net distance matrix must be square");
  require(B.cols() == m, "B must have one column per net point");
  require(C.rows() == n && C.cols() == n, "C must be n x n");
  require(pi.size() == n, "pi must have one entry per row");
  const double dscale = std::max(1.0, D.cwiseAbs().maxCoeff());
  require((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * dscale,
          "net distance matrix must be symmetric");
  require(D.minCoeff() >= -1e-12 * dscale, "distances must be nonnegative");
  require(D.diagonal().cwiseAbs().maxCoeff() <= 1e-9 * dscale,
          "net distance matrix must vanish on the diagonal");
  require(B.minCoeff() >= -1e-12, "B must be nonnegative");
  require((B.rowwise().sum() - Eigen::VectorXd::Ones(n)).cwiseAbs()
                  .maxCoeff() <= 1e-9,
          "B rows must sum to one");
  require(C.minCoeff() >= -1e-12, "C must be nonnegative");
  require((C.rowwise().sum() - Eigen::VectorXd::Ones(n)).cwiseAbs()
                  .maxCoeff() <= 1e-9,
          "C rows must sum to one");
  require(pi.minCoeff() >= -1e-12 && std::abs(pi.sum() - 1.0) <= 1e-9,
          "pi must be a probability vector");
  const Eigen::MatrixXd flux = pi.asDiagonal() * C;
  require((flux - flux.transpose()).cwiseAbs().maxCoeff() <= 1e-9,
          "C must be reversible with respect to pi");

  RoundReport rep;
  rep.w.resize(n);
  const Eigen::MatrixXd Y = B * D;  // row i = candidate profile of point i
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bestv = kInf;
    for (int r = 0; r < m; ++r) {
      const double v = (Y.row(i) - D.row(r)).cwiseAbs().maxCoeff();
      if (v < bestv) {
        bestv = v;
        best = r;
      }
    }
    rep.w[i] = best;
  }
  for (int i = 0; i < n; ++i) {
    if (pi(i) <= 0) continue;
    for (int r = 0; r < m; ++r)
      if (B(i, r) > 0) rep.lhs_b += pi(i) * B(i, r) * powp(D(rep.w[i], r), p);
    for (int j = 0; j < n; ++j)
      if (C(i, j) > 0)
        rep.lhs_c += pi(i) * C(i, j) * powp(D(rep.w[i], rep.w[j]), p);
  }
  const Eigen::MatrixXd mass = B.transpose() * pi.asDiagonal() * C * B;
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s)
      if (mass(r, s) > 0) rep.rhs_base += mass(r, s) * powp(D(r, s), p);
  rep.bound = powp(3.0, p) * rep.rhs_base;
  ensure(std::max(rep.lhs_b, rep.lhs_c) <= rep.bound + 1e-8 * (1 + rep.bound),
         "net rounding exceeded its 3^p certificate");
  return rep;
}

RoundReport round_to_net(const MetricSpace& s, const std::vector<Point>& z,
                         const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                         const Eigen::VectorXd& pi, double p) {
  const int m = static_cast<int>(z.size());
  require(m >= 1, "net must be nonempty");
  Eigen::MatrixXd D(m, m);
  for (int r = 0; r < m; ++r) {
    D(r, r) = 0;
    for (int q = r + 1; q < m; ++q) D(r, q) = D(q, r) = s.dist(z[r], z[q]);
  }
  return round_core(D, B, C, pi, p);
}

json hcert_to_json(const HCertificate& h) {
  json cn{{"w", h.cn.w},
          {"lhs_b", h.cn.lhs_b},
          {"lhs_c", h.cn.lhs_c},
          {"rhs_base", h.cn.rhs_base},
          {"bound", h.cn.bound}};
  json yv = json::array();
  for (const auto& v : h.y) yv.push_back(vec_to_json(v));
  return json{{"n", h.n},
              {"m", h.m},
              {"p", h.p},
              {"M", h.M},
              {"N", h.N},
              {"delta", h.delta},
              {"epsilon", h.epsilon},
              {"t", h.t},
              {"tau", h.tau},
              {"theta", h.theta},
              {"lambda", num_or_inf(h.lambda_cap)},
              {"lip", num_or_inf(h.lip)},
              {"pi", vec_to_json(h.pi)},
              {"B", mat_to_json(h.B)},
              {"A", mat_to_json(h.A)},
              {"w", h.w},
              {"y", yv},
              {"round", cn},
              {"cotype_ratio", num_or_inf(h.cotype_ratio)},
              {"goal_lhs", h.goal_lhs},
              {"goal_rhs", h.goal_rhs},
              {"full_lhs", h.full_lhs},
              {"full_rhs", h.full_rhs},
              {"vacuous", h.vacuous},
              {"pass", h.pass}};
}

HCertificate build_h_certificate(const ExtensionInstance& inst,
                                 const Eigen::MatrixXd& H, double p, double M,
                                 double N, long long t_init, double delta) {
  require(p >= 1, "exponent p must be >= 1");
  require(M >= 1 && N >= 1, "type/cotype constants must be >= 1");
  require(inst.Y.kind == TargetSpace::Kind::Euclidean,
          "weighted certificates support Euclidean targets only");
  require(std::isfinite(inst.lip), "f admits no finite Lipschitz constant");
  const int m = static_cast<int>(inst.anchors.size());
  const int n = static_cast<int>(inst.S.size()) - m;
  require(n >= 1, "need at least one non-anchor point");
  require(H.rows() == m + n && H.cols() == m + n,
          "H must be (m + n) x (m + n), anchors first");
  const double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());
  require((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * hscale,
          "H must be symmetric");
  require(H.minCoeff() >= -1e-12 * hscale, "H must be nonnegative");

  std::vector<Point> z, x;
  {
    std::vector<bool> is_anchor(inst.S.size(), false);
    for (const int a : inst.anchors) {
      is_anchor[a] = true;
      z.push_back(inst.S[a]);
    }
    for (size_t i = 0; i < inst.S.size(); ++i)
      if (!is_anchor[i]) x.push_back(inst.S[i]);
  }
  Eigen::MatrixXd U = H.topLeftCorner(m, m).cwiseMax(0.0);
  Eigen::MatrixXd W = H.bottomLeftCorner(n, m).cwiseMax(0.0);
  Eigen::MatrixXd V = H.bottomRightCorner(n, n).cwiseMax(0.0);
  V.diagonal().setZero();  // the certificate never weighs d(x_i, x_i)

  Eigen::MatrixXd Dzz(m, m), Dxz(n, m), Dxx(n, n), DY(m, m);
  for (int r = 0; r < m; ++r) {
    Dzz(r, r) = 0;
    DY(r, r) = 0;
    for (int s = r + 1; s < m; ++s) {
      Dzz(r, s) = Dzz(s, r) = inst.X.dist(z[r], z[s]);
      DY(r, s) = DY(s, r) = inst.Y.dist(inst.f[r], inst.f[s]);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) Dxz(i, r) = inst.X.dist(x[i], z[r]);
  for (int i = 0; i < n; ++i) {
    Dxx(i, i) = 0;
    for (int j = i + 1; j < n; ++j)
      Dxx(i, j) = Dxx(j, i) = inst.X.dist(x[i], x[j]);
  }
  const auto energy = [p](const Eigen::MatrixXd& wts,
                          const Eigen::MatrixXd& dist) {
    double e = 0;
    for (int i = 0; i < wts.rows(); ++i)
      for (int j = 0; j < wts.cols(); ++j)
        if (wts(i, j) > 0) e += wts(i, j) * powp(dist(i, j), p);
    return e;
  };

  HCertificate h;
  h.n = n;
  h.m = m;
  h.p = p;
  h.M = M;
  h.N = N;
  h.lip = inst.lip;
  h.lambda_cap = powp(18.0, p) / 3.0 * (powp(N, p) + 1) * powp(M, p) *
                 powp(inst.lip, p);

  double e_cross = 0, e_total = 0;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) e_cross += powp(Dxz(i, r), p);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) e_total += powp(Dzz(r, s), p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e_total += powp(Dxx(i, j), p);
  e_total += 2 * e_cross;

  if (e_total <= 0) {  // every point coincides: all energies vanish
    h.delta = std::max(delta, 0.0);
    h.w.assign(n, 0);
    h.y.assign(n, inst.f[0]);
    h.pi = Eigen::VectorXd::Constant(n, 1.0 / n);
    h.B = Eigen::MatrixXd::Constant(n, m, 1.0 / m);
    h.A = Eigen::MatrixXd::Identity(n, n);
    h.vacuous = true;
    h.pass = true;
    return h;
  }
  h.delta = delta > 0 ? delta : 1e-6 * e_total;
  h.epsilon = e_cross > 0 ? std::min(0.5, h.delta / (2 * e_cross)) : 0.5;

  const Eigen::VectorXd rowW = W.rowwise().sum();
  const double sumW = W.sum();
  const double mass = m * n * h.epsilon + sumW;
  h.pi = (rowW.array() + m * h.epsilon) / mass;
  h.B.resize(n, m);
  for (int i = 0; i < n; ++i)
    h.B.row(i) = (W.row(i).array() + h.epsilon) / (m * h.epsilon + rowW(i));

  const double pfac = powp(2.0, p + 1) / ((powp(2.0, p) + 1) * powp(M, p));
  long long t = t_init > 0 ? t_init : 2;
  require(t >= 1, "t must be positive");
  const long long kTCap = 1LL << 34;
  Eigen::MatrixXd A;
  for (;; t *= 2) {
    require(t <= kTCap, "no admissible averaging time below the cap");
    A = Eigen::MatrixXd::Zero(n, n);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double off = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) {
          A(i, j) = pfac / t * V(i, j) / (m * h.epsilon + rowW(i));
          off += A(i, j);
        }
      A(i, i) = 1 - off;
      if (A(i, i) < -1e-12) ok = false;
    }
    if (ok) break;
  }
  h.t = t;
  h.tau = std::max<long long>(
      1, static_cast<long long>(std::ceil(static_cast<double>(t) /
                                          powp(2.0, p) - 1e-12)));
  h.theta = (powp(2.0, p) + 1) * powp(M, p) * (t + 1) / powp(2.0, p + 1) * mass;
  h.A = A.cwiseMax(0.0);
  const ReversibleChain chain = make_chain(h.A, h.pi);
  h.A = chain.A;

  h.cn = round_core(DY, h.B, cesaro_auto(chain, h.tau), h.pi, p);
  h.w = h.cn.w;

  const MetricSpace sY = MetricSpace::euclidean(inst.Y.dim);
  const BarycentricMap mapY =
      p == 2 ? make_map(sY) : make_lp_mean_map(sY, 1.0, p);
  std::vector<Point> wpts(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd& fv = inst.f[h.w[i]];
    wpts[i] = Point::vec(std::vector<double>(fv.data(), fv.data() + fv.size()));
  }
  const CotypeCertificate cert = cotype_construct(mapY, chain, wpts, p, h.tau);
  h.cotype_ratio = cert.ratio;
  h.y.resize(n);
  for (int i = 0; i < n; ++i)
    h.y[i] = Eigen::Map<const Eigen::VectorXd>(cert.y[i].x.data(),
                                               cert.y[i].x.size());

  Eigen::MatrixXd DYy(n, m), DYyy(n, n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r) DYy(i, r) = inst.Y.dist(h.y[i], inst.f[r]);
  for (int i = 0; i < n; ++i) {
    DYyy(i, i) = 0;
    for (int j = i + 1; j < n; ++j)
      DYyy(i, j) = DYyy(j, i) = inst.Y.dist(h.y[i], h.y[j]);
  }
  h.goal_lhs = 2 * energy(W, DYy) + energy(V, DYyy);
  h.goal_rhs =
      h.lambda_cap * (2 * energy(W, Dxz) + energy(V, Dxx) + h.delta);
  h.full_lhs = energy(U, DY) + h.goal_lhs;
  h.full_rhs = h.lambda_cap *
               (energy(U, Dzz) + 2 * energy(W, Dxz) + energy(V, Dxx) + h.delta);
  h.vacuous = H.cwiseAbs().maxCoeff() <= 0;
  h.pass = h.goal_lhs <= h.goal_rhs + 1e-9 * (1 + h.goal_rhs) &&
           h.full_lhs <= h.full_rhs + 1e-9 * (1 + h.full_rhs);
  return h;
}

namespace {

struct Pocs {
  const TargetSpace* Y = nullptr;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> dx;
  std::vector<bool> free_pt;
  double tol = 1e-6;
  long long sweeps = 0;

  // max constraint violation of F at level L, relative to 1 + cap
  double violation(const std::vector<Eigen::VectorXd>& F, double L) const {
    double worst = 0;
    for (size_t k = 0; k < pairs.size(); ++k) {
      const double cap = L * dx[k];
      const double dv = Y->dist(F[pairs[k].first], F[pairs[k].second]);
      worst = std::max(worst, (dv - cap) / (1 + cap));
    }
    return worst;
  }

  bool solve(double L, std::vector<Eigen::VectorXd>& F) {
    const double goal = 0.2 * tol;
    double best = kInf;
    int flat = 0;
    for (int sweep = 0; sweep < 100000; ++sweep) {
      ++sweeps;
      double worst = 0;
      for (size_t k = 0; k < pairs.size(); ++k) {
        const auto [a, b] = pairs[k];
        const double cap = L * dx[k];
        Eigen::VectorXd v = F[a] - F[b];
        const double dv = Y->norm(v);
        worst = std::max(worst, (dv - cap) / (1 + cap));
        if (dv <= cap || dv <= 0) continue;
        const double shift = 1 - cap / dv;
        if (free_pt[a] && free_pt[b]) {
          F[a] -= 0.5 * shift * v;
          F[b] += 0.5 * shift * v;
        } else if (free_pt[a]) {
          F[a] -= shift * v;
        } else if (free_pt[b]) {
          F[b] += shift * v;
        }
      }
      if (worst <= goal) return true;
      if (worst < best - 1e-13 * (1 + best)) {
        best = worst;
        flat = 0;
      } else if (++flat >= 300) {
        return false;  // stalled: treat this level as infeasible
      }
    }
    return false;
  }
};

}  // namespace

ExtensionResult min_lipschitz_extension(const ExtensionInstance& inst,
                                        double tol) {
  require(tol > 0 && tol < 0.5, "tolerance must lie in (0, 0.5)");
  require(std::isfinite(inst.lip), "f admits no finite Lipschitz constant");
  const int ns = static_cast<int>(inst.S.size());
  const int m = static_cast<int>(inst.anchors.size());

  std::vector<bool> is_anchor(ns, false);
  std::vector<Eigen::VectorXd> F(ns, Eigen::VectorXd::Zero(inst.Y.dim));
  for (int r = 0; r < m; ++r) {
    is_anchor[inst.anchors[r]] = true;
    F[inst.anchors[r]] = inst.f[r];
  }
  for (int i = 0; i < ns; ++i) {  // start from the nearest anchor's value
    if (is_anchor[i]) continue;
    int best = 0;
    double bestd = kInf;
    for (int r = 0; r < m; ++r) {
      const double d = inst.X.dist(inst.S[i], inst.S[inst.anchors[r]]);
      if (d < bestd) {
        bestd = d;
        best = r;
      }
    }
    F[i] = inst.f[best];
  }

  ExtensionResult res;
  res.F = F;
  res.L = inst.lip;
  if (ns == m) return res;  // nothing to extend

  Pocs pocs;
  pocs.Y = &inst.Y;
  pocs.tol = tol;
  pocs.free_pt.assign(ns, false);
  for (int i = 0; i < ns; ++i) pocs.free_pt[i] = !is_anchor[i];
  for (int a = 0; a < ns; ++a)
    for (int b = a + 1; b < ns; ++b) {
      pocs.pairs.emplace_back(a, b);
      pocs.dx.push_back(inst.X.dist(inst.S[a], inst.S[b]));
    }

  double hi = inst.lip;
  for (size_t k = 0; k < pocs.pairs.size(); ++k) {
    if (pocs.dx[k] <= 0) continue;
    const double dv = inst.Y.dist(F[pocs.pairs[k].first], F[pocs.pairs[k].second]);
    hi = std::max(hi, dv / pocs.dx[k]);
  }
  hi = hi * (1 + tol) + tol;
  std::vector<Eigen::VectorXd> warm = F;
  for (int tries = 0; !pocs.solve(hi, warm); ++tries) {
    ensure(tries < 60, "failed to bracket a feasible Lipschitz level");
    hi = 2 * hi + 1;
    warm = F;
  }

  double lo = inst.lip;
  std::vector<Eigen::VectorXd> bestF = warm;
  int steps = 0;
  while (hi - lo > tol * (1 + lo) && steps < 200) {
    ++steps;
    const double mid = 0.5 * (lo + hi);
    std::vector<Eigen::VectorXd> trial = bestF;
    if (pocs.solve(mid, trial)) {
      hi = mid;
      bestF = trial;
    } else {
      lo = mid;
    }
  }

  res.L = hi;
  res.F = bestF;
  res.bisection_steps = steps;
  res.sweeps = pocs.sweeps;
  double worst_abs = 0;
  for (size_t k = 0; k < pocs.pairs.size(); ++k) {
    const double dv =
        inst.Y.dist(bestF[pocs.pairs[k].first], bestF[pocs.pairs[k].second]);
    worst_abs = std::max(worst_abs, dv - res.L * pocs.dx[k]);
  }
  res.worst_violation = worst_abs;
  ensure(pocs.violation(bestF, res.L) <= tol,
         "extension violates its own Lipschitz certificate");
  ensure(res.L >= inst.lip - tol * (1 + inst.lip),
         "extension reported a level below the anchor Lipschitz constant");
  return res;
}

std::vector<Eigen::VectorXd> mcshane_extend(const ExtensionInstance& inst) {
  require(inst.Y.kind == TargetSpace::Kind::Euclidean && inst.Y.dim == 1,
          "closed-form extension requires a real-valued target");
  require(std::isfinite(inst.lip), "f admits no finite Lipschitz constant");
  const int m = static_cast<int>(inst.anchors.size());
  std::vector<Eigen::VectorXd> F(inst.S.size(), Eigen::VectorXd::Zero(1));
  for (size_t i = 0; i < inst.S.size(); ++i) {
    double best = kInf;
    for (int r = 0; r < m; ++r)
      best = std::min(best, inst.f[r](0) + inst.lip * inst.X.dist(
                                               inst.S[i],
                                               inst.S[inst.anchors[r]]));
    F[i](0) = best;
  }
  return F;
}

}  // namespace barylab
