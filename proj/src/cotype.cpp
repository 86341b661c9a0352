#include "barylab/cotype.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "barylab/smalllp.hpp"
#include "barylab/spectral.hpp"

namespace barylab {

double weighted_pair_energy(const MetricSpace& s, const Eigen::MatrixXd& M,
                            const Eigen::VectorXd& pi,
                            const std::vector<Point>& x, double p) {
  const int n = static_cast<int>(M.rows());
  require(static_cast<int>(x.size()) == n && pi.size() == n,
          "energy: arity mismatch");
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    if (pi(i) <= 0) continue;
    for (int j = 0; j < n; ++j)
      if (M(i, j) > 0) acc += pi(i) * M(i, j) * powp(s.dist(x[i], x[j]), p);
  }
  return acc;
}

std::vector<std::vector<Point>> dp_layers(const BarycentricMap& map,
                                          const Eigen::MatrixXd& B,
                                          const std::vector<Point>& x,
                                          int t) {
  const int n = static_cast<int>(B.rows());
  require(static_cast<int>(x.size()) == n, "dp: arity mismatch");
  require(t >= 1 && t <= 4096, "dp: t out of range for the layer recursion");
  std::vector<std::vector<Point>> layers(t + 1);
  layers[0] = x;
  for (int r = 1; r <= t; ++r) {
    layers[r].resize(n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> w(n);
      for (int j = 0; j < n; ++j) w[j] = std::max(0.0, B(i, j));
      layers[r][i] = barycenter_points(map, layers[r - 1], w);
    }
  }
  return layers;
}

std::vector<Point> cotype_y_from_layers(
    const BarycentricMap& map,
    const std::vector<std::vector<Point>>& layers) {
  const int t = static_cast<int>(layers.size()) - 1;
  require(t >= 1, "dp: need at least one layer");
  const int n = static_cast<int>(layers[0].size());
  std::vector<Point> y(n);
  const std::vector<double> unit(t, 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<Point> traj(t);
    for (int r = 1; r <= t; ++r) traj[r - 1] = layers[r][i];
    y[i] = barycenter_points(map, traj, unit);
  }
  return y;
}

namespace {

// coordinate fast path: barycenters are linear, so the trajectory average
// collapses to the Cesaro average of the chain applied to the coordinates
std::vector<Point> fast_cesaro_config(const ReversibleChain& c, long long t,
                                      const std::vector<Point>& x, int dim) {
  const int n = c.size();
  const Eigen::MatrixXd M = cesaro_auto(c, t);
  std::vector<Point> y(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> coord(dim, 0.0);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < dim; ++k) coord[k] += M(i, j) * x[j].x[k];
    y[i] = Point::vec(std::move(coord));
  }
  return y;
}

}  // namespace

CotypeCertificate cotype_construct(const BarycentricMap& map,
                                   const ReversibleChain& c,
                                   const std::vector<Point>& x, double p,
                                   long long t) {
  const MetricSpace& s = map.space;
  const int n = c.size();
  require(static_cast<int>(x.size()) == n, "cotype: arity mismatch");
  require(t >= 1, "cotype: t must be >= 1");
  require(p == map.p, "cotype: exponent must match the barycenter map");

  CotypeCertificate cert;
  cert.n = n;
  cert.p = p;
  cert.t = t;
  cert.x = x;

  // everything lives on the support; zero-mass atoms ride along with y = x
  std::vector<int> sup;
  for (int i = 0; i < n; ++i)
    if (c.pi(i) > 0) sup.push_back(i);
  const int m = static_cast<int>(sup.size());
  Eigen::MatrixXd As(m, m);
  Eigen::VectorXd pis(m);
  std::vector<Point> xs(m);
  for (int i = 0; i < m; ++i) {
    pis(i) = c.pi(sup[i]);
    xs[i] = x[sup[i]];
    for (int j = 0; j < m; ++j) As(i, j) = c.A(sup[i], sup[j]);
  }
  const ReversibleChain cs = make_chain(As, pis);
  const double rhs = weighted_pair_energy(s, cesaro_auto(cs, t), pis, xs, p);

  std::vector<Point> ys = xs;
  if (rhs > 0) {
    ReversibleChain smoothed = cs;
    if (As.minCoeff() <= 0) {
      Eigen::MatrixXd Pi(m, m);
      for (int i = 0; i < m; ++i) Pi.row(i) = pis.transpose();
      for (int k = 1; k <= 40; ++k) {
        const double eps = std::ldexp(1.0, -k);
        ReversibleChain cand =
            make_chain((1 - eps) * As + eps * Pi, pis);
        if (weighted_pair_energy(s, cesaro_auto(cand, t), pis, xs, p) <=
            2 * rhs) {
          smoothed = std::move(cand);
          cert.epsilon = eps;
          break;
        }
      }
      ensure(cert.epsilon > 0, "cotype: no smoothing level preserves energy");
    }
    if (map.kind == MapKind::VectorMean) {
      cert.fast_path = true;
      ys = fast_cesaro_config(smoothed, t, xs, s.dim);
    } else {
      ys = cotype_y_from_layers(
          map, dp_layers(map, smoothed.A, xs, static_cast<int>(t)));
    }
  }

  cert.y = x;
  for (int i = 0; i < m; ++i) cert.y[sup[i]] = ys[i];

  double close = 0;
  for (int i = 0; i < m; ++i)
    close += pis(i) * powp(s.dist(xs[i], ys[i]), p);
  cert.lhs = close + static_cast<double>(t) *
                         weighted_pair_energy(s, As, pis, ys, p);
  cert.rhs_base = rhs;
  cert.ratio = (cert.lhs == 0 && rhs == 0) ? 1.0 : safe_ratio(cert.lhs, rhs);
  return cert;
}

void validate_martingale(const BarycentricMap& map,
                         const MartingaleInstance& mart) {
  const MetricSpace& s = map.space;
  const int W = mart.omega_size();
  const int L = mart.levels();
  require(W >= 1 && L >= 1, "martingale: empty instance");
  require(static_cast<int>(mart.Z.size()) == L,
          "martingale: atom/Z level mismatch");
  for (int l = 0; l < L; ++l)
    require(static_cast<int>(mart.atom[l].size()) == W &&
                static_cast<int>(mart.Z[l].size()) == W,
            "martingale: ragged level " + std::to_string(l));
  for (double w : mart.mu)
    require(w > 0, "martingale: zero-mass atom in mu");

  double scale = 1.0;
  for (int l = 0; l < L; ++l)
    for (int w = 0; w < W; ++w)
      scale = std::max(scale, s.dist(mart.Z[l][w], mart.Z[0][0]));
  const double tol = 1e-9 * scale;

  for (int w = 0; w < W; ++w)
    require(mart.atom[0][w] == mart.atom[0][0],
            "martingale: level 0 must be the trivial partition");
  for (int l = 0; l + 1 < L; ++l)
    for (int w1 = 0; w1 < W; ++w1)
      for (int w2 = w1 + 1; w2 < W; ++w2)
        require(mart.atom[l + 1][w1] != mart.atom[l + 1][w2] ||
                    mart.atom[l][w1] == mart.atom[l][w2],
                "martingale: level " + std::to_string(l + 1) +
                    " does not refine level " + std::to_string(l));
  for (int l = 0; l < L; ++l)
    for (int w1 = 0; w1 < W; ++w1)
      for (int w2 = w1 + 1; w2 < W; ++w2)
        if (mart.atom[l][w1] == mart.atom[l][w2])
          ensure(s.dist(mart.Z[l][w1], mart.Z[l][w2]) <= tol,
                 "martingale: Z not adapted at level " + std::to_string(l));

  for (int l = 0; l + 1 < L; ++l) {
    std::map<int, std::vector<int>> members;
    for (int w = 0; w < W; ++w) members[mart.atom[l][w]].push_back(w);
    for (const auto& [id, idx] : members) {
      const Point b =
          conditional_barycenter(map, mart.Z[l + 1], mart.mu, idx);
      ensure(s.dist(mart.Z[l][idx[0]], b) <= tol,
             "martingale: property fails at level " + std::to_string(l) +
                 " atom " + std::to_string(id));
    }
  }
}

double pisier_residual(const BarycentricMap& map, const MartingaleInstance& m,
                       const Point& z, double K, double p) {
  require(K > 0 && p >= 1, "pisier: bad parameters");
  const MetricSpace& s = map.space;
  const int L = m.levels();
  const double Kp = powp(K, p);
  double acc = Kp * powp(s.dist(m.Z[0][0], z), p);
  for (int l = 0; l + 1 < L; ++l)
    for (int w = 0; w < m.omega_size(); ++w)
      acc += m.mu[w] * powp(s.dist(m.Z[l + 1][w], m.Z[l][w]), p);
  for (int w = 0; w < m.omega_size(); ++w)
    acc -= Kp * m.mu[w] * powp(s.dist(m.Z[L - 1][w], z), p);
  return acc;
}

MartingaleInstance dp_martingale(const BarycentricMap& map,
                                 const ReversibleChain& c,
                                 const std::vector<Point>& x, int t) {
  const int n = c.size();
  require(static_cast<int>(x.size()) == n, "martingale: arity mismatch");
  require(t >= 1, "martingale: t must be >= 1");

  const auto layers = dp_layers(map, c.A, x, t);

  // positive-probability trajectories i_0 .. i_t under the stationary start
  std::vector<std::vector<int>> paths;
  std::vector<double> mu;
  std::vector<int> cur;
  auto extend = [&](auto&& self, double mass) -> void {
    if (static_cast<int>(cur.size()) == t + 1) {
      paths.push_back(cur);
      mu.push_back(mass);
      require(paths.size() <= 100000, "martingale: path space too large");
      return;
    }
    const int last = cur.empty() ? -1 : cur.back();
    for (int j = 0; j < n; ++j) {
      const double step = last < 0 ? c.pi(j) : c.A(last, j);
      if (step <= 0) continue;
      cur.push_back(j);
      self(self, mass * step);
      cur.pop_back();
    }
  };
  extend(extend, 1.0);
  const int W = static_cast<int>(paths.size());
  ensure(W >= 1, "martingale: no positive-mass trajectory");

  MartingaleInstance m;
  m.mu = std::move(mu);
  m.atom.assign(t + 2, std::vector<int>(W, 0));
  m.Z.assign(t + 2, std::vector<Point>(W));

  std::vector<double> piw(c.pi.data(), c.pi.data() + n);
  const Point z0 = barycenter_points(map, layers[t], piw);
  for (int w = 0; w < W; ++w) m.Z[0][w] = z0;

  for (int level = 1; level <= t + 1; ++level) {
    std::map<std::vector<int>, int> ids;
    for (int w = 0; w < W; ++w) {
      std::vector<int> prefix(paths[w].begin(), paths[w].begin() + level);
      const auto it = ids.try_emplace(prefix, static_cast<int>(ids.size()));
      m.atom[level][w] = it.first->second;
      m.Z[level][w] = layers[t - level + 1][paths[w][level - 1]];
    }
  }
  return m;
}

DominationReport domination_report(const MetricSpace& s,
                                   const ReversibleChain& c,
                                   const std::vector<Point>& x, double p,
                                   long long t) {
  require(p >= 1 && t >= 1, "domination: bad parameters");
  DominationReport r;
  r.t = t;
  r.t_ces = static_cast<long long>(
      std::ceil(p * static_cast<double>(t)) + 0.5);
  r.e_pow = weighted_pair_energy(s, chain_power(c, t), c.pi, x, p);
  r.e_ces = weighted_pair_energy(s, cesaro_auto(c, t), c.pi, x, p);
  r.e_green = weighted_pair_energy(s, green(c, t).B, c.pi, x, p);
  r.e_ces_pt = weighted_pair_energy(s, cesaro_auto(c, r.t_ces), c.pi, x, p);
  const double scale = std::max(1.0, r.e_ces);
  ensure(r.e_pow <= powp(2.0, p) * r.e_ces + 1e-9 * scale,
         "domination: power energy exceeds 2^p Cesaro energy");
  r.pow_ratio = safe_ratio(r.e_pow, r.e_ces);
  r.green_ratio = safe_ratio(r.e_green, r.e_ces_pt);
  r.green_flag = r.green_ratio > 64.0 * p * powp(2.0, p);
  return r;
}

BallCotypeResult ball_cotype_certificate(const MetricSpace& s,
                                         const ReversibleChain& c,
                                         const std::vector<Point>& x,
                                         const std::vector<Point>& y,
                                         double p, long long t) {
  const int n = c.size();
  require(static_cast<int>(x.size()) == n &&
              static_cast<int>(y.size()) == n,
          "ball cotype: arity mismatch");
  require(t >= 1 && p >= 1, "ball cotype: bad parameters");
  BallCotypeResult r;
  double close = 0;
  for (int i = 0; i < n; ++i)
    close += c.pi(i) * powp(s.dist(x[i], y[i]), p);
  r.lhs = close + static_cast<double>(t - 1) *
                      weighted_pair_energy(s, c.A, c.pi, y, p);
  r.rhs = weighted_pair_energy(s, green(c, t).B, c.pi, x, p);
  r.ratio = safe_ratio(r.lhs, r.rhs);
  return r;
}

namespace {

double path_objective(const ReversibleChain& c, const std::vector<double>& x,
                      const std::vector<double>& y, double p, double t) {
  const int n = c.size();
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    acc += c.pi(i) * powp(std::abs(y[i] - x[i]), p);
    for (int j = 0; j < n; ++j)
      if (c.A(i, j) > 0)
        acc += t * c.pi(i) * c.A(i, j) * powp(std::abs(y[i] - y[j]), p);
  }
  return acc;
}

// exact minimizer at p = 1: split |.| terms into slack rows and solve the
// resulting equality-form program
std::vector<double> path_lp_minimize(const ReversibleChain& c,
                                     const std::vector<double>& x, double t) {
  const int n = c.size();
  const int ne = n - 1;
  // columns: y+ (n), y- (n), u (n), s (n), r (n), v (ne), q (ne), w (ne)
  const int cols = 5 * n + 3 * ne;
  const int rows = 2 * n + 2 * ne;
  auto col_y = [&](int i) { return i; };
  auto col_yneg = [&](int i) { return n + i; };
  auto col_u = [&](int i) { return 2 * n + i; };
  auto col_s = [&](int i) { return 3 * n + i; };
  auto col_r = [&](int i) { return 4 * n + i; };
  auto col_v = [&](int i) { return 5 * n + i; };
  auto col_q = [&](int i) { return 5 * n + ne + i; };
  auto col_w = [&](int i) { return 5 * n + 2 * ne + i; };
  std::vector<std::vector<double>> A(rows, std::vector<double>(cols, 0.0));
  std::vector<double> b(rows, 0.0), obj(cols, 0.0);
  for (int i = 0; i < n; ++i) {
    // u_i >= y_i - x_i  and  u_i >= x_i - y_i
    A[2 * i][col_u(i)] = 1;
    A[2 * i][col_y(i)] = -1;
    A[2 * i][col_yneg(i)] = 1;
    A[2 * i][col_s(i)] = -1;
    b[2 * i] = -x[i];
    A[2 * i + 1][col_u(i)] = 1;
    A[2 * i + 1][col_y(i)] = 1;
    A[2 * i + 1][col_yneg(i)] = -1;
    A[2 * i + 1][col_r(i)] = -1;
    b[2 * i + 1] = x[i];
    obj[col_u(i)] = c.pi(i);
  }
  for (int e = 0; e < ne; ++e) {
    const int base = 2 * n + 2 * e;
    // v_e >= |y_{e+1} - y_e|
    A[base][col_v(e)] = 1;
    A[base][col_y(e + 1)] = -1;
    A[base][col_yneg(e + 1)] = 1;
    A[base][col_y(e)] = 1;
    A[base][col_yneg(e)] = -1;
    A[base][col_q(e)] = -1;
    A[base + 1][col_v(e)] = 1;
    A[base + 1][col_y(e + 1)] = 1;
    A[base + 1][col_yneg(e + 1)] = -1;
    A[base + 1][col_y(e)] = -1;
    A[base + 1][col_yneg(e)] = 1;
    A[base + 1][col_w(e)] = -1;
    obj[col_v(e)] = t * (c.pi(e) * c.A(e, e + 1) + c.pi(e + 1) * c.A(e + 1, e));
  }
  lp::Solution sol = lp::solve_standard(A, b, obj);
  ensure(sol.feasible && sol.optimal, "path lp: solve failed");
  ensure(sol.gap <= 1e-7 * (1 + std::abs(sol.objective)),
         "path lp: weak duality certificate");
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = sol.x[col_y(i)] - sol.x[col_yneg(i)];
  return y;
}

// p = 2 minimizer: the objective is quadratic with gradient
// 2 Dpi (y - x) + 4 t Dpi (I - A) y, so (I + 2t(I - A)) y = x.
std::vector<double> path_closed_form(const ReversibleChain& c,
                                     const std::vector<double>& x, double t) {
  const int n = c.size();
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) +
                              2 * t * (Eigen::MatrixXd::Identity(n, n) - c.A);
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::VectorXd yv = lhs.partialPivLu().solve(xv);
  return std::vector<double>(yv.data(), yv.data() + n);
}

std::vector<double> path_subgradient(const ReversibleChain& c,
                                     const std::vector<double>& x, double p,
                                     double t) {
  const int n = c.size();
  std::vector<double> y = x, best = x, g(n);
  double best_val = path_objective(c, x, y, p, t);
  for (int k = 1; k <= 100000; ++k) {
    for (int i = 0; i < n; ++i) {
      const double d0 = y[i] - x[i];
      g[i] = c.pi(i) * p * powp(std::abs(d0), p - 1) * (d0 >= 0 ? 1 : -1);
      for (int j = 0; j < n; ++j) {
        const double coef = c.pi(i) * c.A(i, j) + c.pi(j) * c.A(j, i);
        if (coef <= 0 || i == j) continue;
        const double dd = y[i] - y[j];
        g[i] += t * coef * p * powp(std::abs(dd), p - 1) * (dd >= 0 ? 1 : -1);
      }
    }
    double gn = 0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (gn < 1e-14) break;
    const double step = (n / 2.0) / std::sqrt(static_cast<double>(k)) / gn;
    for (int i = 0; i < n; ++i) y[i] -= step * g[i];
    const double val = path_objective(c, x, y, p, t);
    if (val < best_val) {
      best_val = val;
      best = y;
    }
  }
  return best;
}

}  // namespace

PathCotypeResult path_cotype_experiment(int n, double p, double tc,
                                        double te) {
  require(n >= 2, "path experiment: n must be >= 2");
  require(p >= 1 && p <= 2, "path experiment: p must lie in [1, 2]");
  require(tc > 0, "path experiment: c must be positive");
  if (te < 0) te = p;
  PathCotypeResult r;
  r.n = n;
  r.p = p;
  r.t = static_cast<long long>(
      std::ceil(tc * std::pow(static_cast<double>(n), te)));
  r.t = std::max<long long>(r.t, 1);

  const ReversibleChain c = generate_chain("path_holding", n, 0);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i + 1;

  if (p == 1.0) {
    r.method = "lp";
    r.y = path_lp_minimize(c, x, static_cast<double>(r.t));
  } else if (p == 2.0) {
    r.method = "closed_form";
    r.y = path_closed_form(c, x, static_cast<double>(r.t));
  } else {
    r.method = "subgradient";
    r.y = path_subgradient(c, x, p, static_cast<double>(r.t));
  }
  r.lhs_min = path_objective(c, x, r.y, p, static_cast<double>(r.t));

  const MetricSpace line = MetricSpace::euclidean(1);
  std::vector<Point> xp(n);
  for (int i = 0; i < n; ++i) xp[i] = Point::vec({x[i]});
  r.rhs = weighted_pair_energy(line, cesaro_auto(c, r.t), c.pi, xp, p);
  r.ratio = safe_ratio(r.lhs_min, r.rhs);
  return r;
}

}  // namespace barylab
