#include "barylab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace barylab {

double safe_ratio(double num, double den) {
  if (den > 0) return num / den;
  return num > 0 ? kInf : 0.0;
}

namespace {

// incremental state for the two-sided ratio ascent
struct GammaState {
  const MetricSpace* s = nullptr;
  const ReversibleChain* c = nullptr;
  double p = 2;
  std::vector<Point> x, y;
  Eigen::MatrixXd D;  // d(x_i, y_j)^p
  double num = 0, den = 0;

  void rebuild() {
    const int n = c->size();
    D.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D(i, j) = powp(s->dist(x[i], y[j]), p);
    num = den = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        num += c->pi(i) * c->pi(j) * D(i, j);
        den += c->pi(i) * c->A(i, j) * D(i, j);
      }
  }
  double ratio() const { return safe_ratio(num, den); }

  // replace x_i (side 0) or y_i (side 1); returns the new ratio
  double try_replace(int side, int i, const Point& q, bool commit) {
    const int n = c->size();
    double dnum = 0, dden = 0;
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) {
      const double nd =
          powp(side == 0 ? s->dist(q, y[j]) : s->dist(x[j], q), p);
      row[j] = nd;
      if (side == 0) {
        dnum += c->pi(i) * c->pi(j) * (nd - D(i, j));
        dden += c->pi(i) * c->A(i, j) * (nd - D(i, j));
      } else {
        dnum += c->pi(j) * c->pi(i) * (nd - D(j, i));
        dden += c->pi(j) * c->A(j, i) * (nd - D(j, i));
      }
    }
    const double r = safe_ratio(num + dnum, den + dden);
    if (commit) {
      num += dnum;
      den += dden;
      for (int j = 0; j < n; ++j)
        (side == 0 ? D(i, j) : D(j, i)) = row[j];
      (side == 0 ? x[i] : y[i]) = q;
    }
    return r;
  }
};

// spectral witness x_i = v_i / sqrt(pi_i), y = sign(lambda) x, mapped to
// the first coordinate and scaled into the sample ball
bool eigen_seed(const MetricSpace& s, const ReversibleChain& c,
                std::vector<Point>& x, std::vector<Point>& y) {
  if (s.kind != SpaceKind::Euclidean && s.kind != SpaceKind::Lp) return false;
  const int n = c.size();
  if (n < 2) return false;
  SpectralDecomposition d = decompose(c);
  if (static_cast<int>(d.support.size()) != n) return false;
  int k = 1;
  for (int j = 2; j < n; ++j)
    if (std::abs(d.lambda(j)) > std::abs(d.lambda(k))) k = j;
  const double sign = d.lambda(k) >= 0 ? 1.0 : -1.0;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = d.U(i, k) / d.sqrt_pi(i);
  const double scale = 0.9 / std::max(1e-12, v.cwiseAbs().maxCoeff());
  x.assign(n, Point());
  y.assign(n, Point());
  for (int i = 0; i < n; ++i) {
    std::vector<double> cx(s.dim, 0.0), cy(s.dim, 0.0);
    cx[0] = scale * v(i);
    cy[0] = sign * cx[0];
    x[i] = Point::vec(std::move(cx));
    y[i] = Point::vec(std::move(cy));
  }
  return true;
}

}  // namespace

double gamma_plus_fixed(const MetricSpace& s, const ReversibleChain& c,
                        const std::vector<Point>& x,
                        const std::vector<Point>& y, double p) {
  const int n = c.size();
  require(static_cast<int>(x.size()) == n && static_cast<int>(y.size()) == n,
          "gamma: configuration arity mismatch");
  require(p >= 1, "gamma: need p >= 1");
  GammaState st{&s, &c, p, x, y, {}, 0, 0};
  st.rebuild();
  return st.ratio();
}

double gamma_plus_analytic(const ReversibleChain& c) {
  const double gap = absolute_gap(c);
  return gap >= 1.0 ? kInf : 1.0 / (1.0 - gap);
}

GammaSearch gamma_plus_search(const MetricSpace& s, const ReversibleChain& c,
                              double p, int restarts, std::uint64_t seed) {
  require(restarts >= 1, "gamma search: restarts must be >= 1");
  const int n = c.size();
  Rng rng(seed, 4);
  GammaSearch best;
  for (int r = 0; r < restarts; ++r) {
    GammaState st{&s, &c, p, {}, {}, {}, 0, 0};
    if (r != 0 || !eigen_seed(s, c, st.x, st.y)) {
      st.x.resize(n);
      st.y.resize(n);
      for (int i = 0; i < n; ++i) {
        st.x[i] = s.sample(rng);
        st.y[i] = s.sample(rng);
      }
    }
    st.rebuild();
    double cur = st.ratio();
    double step = 0.25;
    for (int pass = 0; pass < 60 && step > 1e-12; ++pass, step *= 0.6) {
      for (int side = 0; side < 2; ++side)
        for (int i = 0; i < n; ++i) {
          const Point q =
              s.perturb(side == 0 ? st.x[i] : st.y[i], step, rng);
          const double cand = st.try_replace(side, i, q, false);
          if (cand > cur) cur = st.try_replace(side, i, q, true);
        }
    }
    const double certified = gamma_plus_fixed(s, c, st.x, st.y, p);
    if (certified > best.gamma) {
      best.gamma = certified;
      best.x = st.x;
      best.y = st.y;
    }
    ++best.restarts;
  }
  return best;
}

MarkovTypeCheck markov_type_check(const MetricSpace& s,
                                  const ReversibleChain& c,
                                  const std::vector<Point>& x, double p,
                                  long long t, double M) {
  const int n = c.size();
  require(static_cast<int>(x.size()) == n, "type check: arity mismatch");
  require(t >= 1 && M > 0 && p >= 1, "type check: bad parameters");
  const Eigen::MatrixXd At = chain_power(c, t);
  MarkovTypeCheck out;
  double base = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dp = powp(s.dist(x[i], x[j]), p);
      out.lhs += c.pi(i) * At(i, j) * dp;
      base += c.pi(i) * c.A(i, j) * dp;
    }
  out.rhs = powp(M, p) * static_cast<double>(t) * base;
  out.residual = out.lhs - out.rhs;
  return out;
}

std::vector<Point> apply_markov_operator(const BarycentricMap& map,
                                         const Eigen::MatrixXd& rows,
                                         const std::vector<Point>& f) {
  const int n = static_cast<int>(rows.rows());
  require(static_cast<int>(f.size()) == n && rows.cols() == n,
          "operator: arity mismatch");
  std::vector<Point> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = std::max(0.0, rows(i, j));
    out[i] = barycenter_points(map, f, w);
  }
  return out;
}

double lpn_dist(const MetricSpace& s, const Eigen::VectorXd& pi,
                const std::vector<Point>& f, const std::vector<Point>& g,
                double p) {
  require(f.size() == g.size() &&
              static_cast<int>(f.size()) == pi.size(),
          "lpn: arity mismatch");
  double acc = 0;
  for (int i = 0; i < pi.size(); ++i)
    acc += pi(i) * powp(s.dist(f[i], g[i]), p);
  return std::pow(acc, 1.0 / p);
}

Point global_barycenter(const BarycentricMap& map, const Eigen::VectorXd& pi,
                        const std::vector<Point>& f) {
  std::vector<double> w(pi.data(), pi.data() + pi.size());
  return barycenter_points(map, f, w);
}

LambdaEstimate lambda_estimate(const BarycentricMap& map,
                               const ReversibleChain& c,
                               const Eigen::MatrixXd& op_rows, double p,
                               int restarts, std::uint64_t seed) {
  require(restarts >= 1, "lambda: restarts must be >= 1");
  const MetricSpace& s = map.space;
  const int n = c.size();
  Rng rng(seed, 5);
  LambdaEstimate best;

  auto ratio_of = [&](const std::vector<Point>& f) {
    const Point bf = global_barycenter(map, c.pi, f);
    const std::vector<Point> cf(n, bf);
    const double den = lpn_dist(s, c.pi, f, cf, p);
    if (den < 1e-12) return -1.0;
    const std::vector<Point> tf = apply_markov_operator(map, op_rows, f);
    const Point btf = global_barycenter(map, c.pi, tf);
    const std::vector<Point> ctf(n, btf);
    return lpn_dist(s, c.pi, tf, ctf, p) / den;
  };

  for (int r = 0; r < restarts; ++r) {
    std::vector<Point> f(n);
    bool seeded = false;
    if (r == 0 && (s.kind == SpaceKind::Euclidean || s.kind == SpaceKind::Lp)) {
      std::vector<Point> dummy_y;
      seeded = eigen_seed(s, c, f, dummy_y);
    }
    if (!seeded)
      for (int i = 0; i < n; ++i) f[i] = s.sample(rng);
    double cur = ratio_of(f);
    double step = 0.25;
    for (int pass = 0; pass < 25 && step > 1e-10; ++pass, step *= 0.6) {
      for (int i = 0; i < n; ++i) {
        const Point save = f[i];
        f[i] = s.perturb(save, step, rng);
        const double cand = ratio_of(f);
        if (cand > cur)
          cur = cand;
        else
          f[i] = save;
      }
    }
    if (cur > best.lambda) {
      best.lambda = cur;
      best.witness = f;
    }
  }
  return best;
}

double beta_p(double K, double p) {
  require(K >= 1 && p >= 1, "beta_p: need K >= 1, p >= 1");
  if (K == 1.0) return 1.0;
  const double Kp = std::pow(K, p);
  auto g = [&](double b) {
    return std::pow(b, p) + Kp * std::pow(b - 1, p) - Kp;
  };
  double lo = 1.0, hi = std::min(K, 2.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double lambda_bound_from_gamma(double gamma, double K, double p) {
  require(K >= 1 && p >= 1, "lambda bound: need K >= 1, p >= 1");
  gamma = std::max(gamma, 1.0);
  const double beta = beta_p(K, p);
  if (gamma == kInf) return beta;
  const double K2p = std::pow(K, 2 * p), Kp = std::pow(K, p);
  return beta * std::pow((K2p * gamma - 1) / (K2p * gamma + Kp), 1.0 / p);
}

CalculusReport calculus_report(const MetricSpace& s, const ReversibleChain& c,
                               double p, long long t, double Gamma, double K,
                               int budget, std::uint64_t seed) {
  require(t >= 1 && p >= 1 && Gamma >= 1 && K >= 1, "calculus: bad params");
  CalculusReport r;
  r.p = p;
  r.t = t;
  r.analytic = s.kind == SpaceKind::Euclidean && p == 2 && s.alpha == 1.0;

  const ReversibleChain ces = make_chain(cesaro_auto(c, t), c.pi);
  const ReversibleChain pow = make_chain(chain_power(c, t), c.pi);
  if (r.analytic) {
    r.gamma = gamma_plus_analytic(c);
    r.gamma_ces = gamma_plus_analytic(ces);
    r.gamma_pow = gamma_plus_analytic(pow);
  } else {
    r.gamma = gamma_plus_search(s, c, p, budget, seed).gamma;
    r.gamma_ces = gamma_plus_search(s, ces, p, budget, seed + 1).gamma;
    r.gamma_pow = gamma_plus_search(s, pow, p, budget, seed + 2).gamma;
  }

  r.lambda_bound = lambda_bound_from_gamma(r.gamma, K, p);
  const double lam2t = std::pow(r.lambda_bound, 2.0 * static_cast<double>(t));
  if (r.lambda_bound >= 1.0 || lam2t >= 1.0) {
    r.iterate_upper = kInf;
    r.flags.push_back("vacuous");
  } else {
    r.iterate_upper = std::pow(Gamma + 4 * (Gamma + 1) / (1 - lam2t), p);
  }
  r.cesaro_envelope =
      r.gamma == kInf ? kInf
                      : 20.0 * std::max(1.0, r.gamma / static_cast<double>(t));
  r.utilization = r.iterate_upper == kInf ? 0 : r.gamma_pow / r.iterate_upper;
  if (r.gamma_pow > r.iterate_upper + 1e-6)
    r.flags.push_back("iterate_bound_exceeded");
  if (r.gamma_ces > r.cesaro_envelope + 1e-6)
    r.flags.push_back("cesaro_envelope_exceeded");
  return r;
}

json calculus_to_json(const CalculusReport& r) {
  return json{{"p", r.p},
              {"t", r.t},
              {"analytic", r.analytic},
              {"gamma", num_or_inf(r.gamma)},
              {"gamma_cesaro", num_or_inf(r.gamma_ces)},
              {"gamma_power", num_or_inf(r.gamma_pow)},
              {"lambda_bound", r.lambda_bound},
              {"iterate_upper", num_or_inf(r.iterate_upper)},
              {"cesaro_envelope", num_or_inf(r.cesaro_envelope)},
              {"utilization", r.utilization},
              {"flags", r.flags}};
}

}  // namespace barylab
