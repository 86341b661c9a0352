#include "barylab/barycenter.hpp"

#include <algorithm>
#include <cmath>

namespace barylab {

namespace {

Point vector_mean(const MetricSpace& s, const std::vector<Point>& pts,
                  const std::vector<double>& lam) {
  std::vector<double> acc(s.dim, 0.0);
  for (size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < s.dim; ++k) acc[k] += lam[i] * pts[i].x[k];
  return Point::vec(std::move(acc));
}

// F restricted to an edge is piecewise quadratic with unit leading
// coefficient: supports off the edge contribute a linear distance through
// the nearer endpoint, supports on it contribute |tau - s|.
Point tree_vertex(int i) { return Point::on_edge(i, i, 0.0); }

Point tree_barycenter(const MetricSpace& s, const std::vector<Point>& pts,
                      const std::vector<double>& lam) {
  const size_t n = pts.size();
  std::vector<Point> canon(n);
  for (size_t i = 0; i < n; ++i) canon[i] = s.canonical(pts[i]);
  if (s.tree_edges().empty()) return tree_vertex(0);

  double best_val = kInf;
  Point best = tree_vertex(0);
  for (const TreeEdge& e : s.tree_edges()) {
    const int lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
    const double w = e.w;
    // per support: distance is sigma*tau + c on each breakpoint interval
    std::vector<double> breaks = {0.0, w};
    std::vector<double> dlo(n), dhi(n), on_offset(n, -1.0);
    for (size_t i = 0; i < n; ++i) {
      const Point& z = canon[i];
      if (z.u == lo && z.v == hi && z.u != z.v) {
        on_offset[i] = z.t;
        breaks.push_back(z.t);
      } else {
        dlo[i] = s.dist(tree_vertex(lo), z);
        dhi[i] = s.dist(tree_vertex(hi), z);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
      const double a = breaks[k], b = breaks[k + 1];
      if (b - a <= 0) continue;
      const double mid = 0.5 * (a + b);
      // F(tau) = tau^2 + 2 tau * cross + const
      double cross = 0, constant = 0;
      for (size_t i = 0; i < n; ++i) {
        double sigma, c;
        if (on_offset[i] >= 0) {
          sigma = mid >= on_offset[i] ? 1.0 : -1.0;
          c = -sigma * on_offset[i];
        } else if (dlo[i] <= dhi[i]) {
          sigma = 1.0;
          c = dlo[i];
        } else {
          sigma = -1.0;
          c = w + dhi[i];
        }
        cross += lam[i] * sigma * c;
        constant += lam[i] * c * c;
      }
      const double tau = std::clamp(-cross, a, b);
      const double val = tau * tau + 2 * tau * cross + constant;
      if (val < best_val) {
        best_val = val;
        best = s.canonical(Point::on_edge(lo, hi, tau));
      }
    }
  }
  return best;
}

// Poincare disk gyrovector operations (curvature -1)
std::vector<double> mobius_add(const std::vector<double>& u,
                               const std::vector<double>& v) {
  const double uv = u[0] * v[0] + u[1] * v[1];
  const double nu = u[0] * u[0] + u[1] * u[1];
  const double nv = v[0] * v[0] + v[1] * v[1];
  const double den = 1 + 2 * uv + nu * nv;
  const double cu = (1 + 2 * uv + nv) / den, cv = (1 - nu) / den;
  return {cu * u[0] + cv * v[0], cu * u[1] + cv * v[1]};
}

// tangent vector at y pointing to x with Euclidean-coordinate length
// (2/lambda_y) artanh | -y (+) x |
std::vector<double> hyp_log(const std::vector<double>& y,
                            const std::vector<double>& x) {
  const std::vector<double> w = mobius_add({-y[0], -y[1]}, x);
  const double r = std::hypot(w[0], w[1]);
  if (r < 1e-300) return {0.0, 0.0};
  const double lam = 2.0 / (1.0 - (y[0] * y[0] + y[1] * y[1]));
  const double scale = (2.0 / lam) * std::atanh(std::min(r, 1 - 1e-16)) / r;
  return {scale * w[0], scale * w[1]};
}

std::vector<double> hyp_exp(const std::vector<double>& y,
                            const std::vector<double>& v) {
  const double r = std::hypot(v[0], v[1]);
  if (r < 1e-300) return y;
  const double lam = 2.0 / (1.0 - (y[0] * y[0] + y[1] * y[1]));
  const double scale = std::tanh(lam * r / 2.0) / r;
  return mobius_add(y, {scale * v[0], scale * v[1]});
}

Point hyperbolic_karcher(const MetricSpace& s, const std::vector<Point>& pts,
                         const std::vector<double>& lam) {
  auto value = [&](const std::vector<double>& y) {
    const Point py = Point::vec(y);
    double f = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      const double d = s.dist(py, pts[i]);
      f += lam[i] * d * d;
    }
    return f;
  };
  std::vector<double> y = pts[0].x;
  double fy = value(y);
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<double> m = {0.0, 0.0};
    for (size_t i = 0; i < pts.size(); ++i) {
      const auto g = hyp_log(y, pts[i].x);
      m[0] += lam[i] * g[0];
      m[1] += lam[i] * g[1];
    }
    const double lam_y = 2.0 / (1.0 - (y[0] * y[0] + y[1] * y[1]));
    if (lam_y * std::hypot(m[0], m[1]) < 1e-13) break;
    double step = 1.0;
    bool moved = false;
    for (int h = 0; h < 40 && !moved; ++h, step *= 0.5) {
      const auto cand = hyp_exp(y, {step * m[0], step * m[1]});
      const double fc = value(cand);
      if (fc < fy) {
        y = cand;
        fy = fc;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return Point::vec(y);
}

void check_weights(const std::vector<Point>& pts,
                   const std::vector<double>& w) {
  require(!pts.empty() && pts.size() == w.size(),
          "barycenter: points/weights mismatch");
  double total = 0;
  for (double wi : w) {
    require(wi >= 0, "barycenter: negative weight");
    total += wi;
  }
  require(total > 0, "barycenter: zero total mass");
}

}  // namespace

BarycentricMap make_map(const MetricSpace& s) {
  require(s.alpha == 1.0, "map: snowflaked spaces have no barycenter map");
  BarycentricMap m;
  m.space = s;
  switch (s.kind) {
    case SpaceKind::Euclidean:
      m.kind = MapKind::VectorMean;
      break;
    case SpaceKind::Tree:
      m.kind = MapKind::TreeExact;
      break;
    case SpaceKind::HyperbolicDisk:
      m.kind = MapKind::HyperbolicKarcher;
      break;
    case SpaceKind::Lp:
      throw input_error("map: l_p spaces need make_lp_mean_map with a K");
    case SpaceKind::Matrix:
      throw input_error("map: finite matrix spaces carry no barycenter map");
  }
  return m;
}

BarycentricMap make_lp_mean_map(const MetricSpace& s, double K, double p) {
  require(s.kind == SpaceKind::Lp || s.kind == SpaceKind::Euclidean,
          "map: coordinate mean needs a coordinate space");
  require(s.alpha == 1.0, "map: snowflaked spaces have no barycenter map");
  require(K >= 1 && p >= 1, "map: need K >= 1 and p >= 1");
  BarycentricMap m;
  m.space = s;
  m.kind = MapKind::VectorMean;
  m.p = p;
  m.K = K;
  return m;
}

BarycentricMap map_from_json(const json& j) {
  require(j.is_object() && j.contains("space"), "map: need a space");
  MetricSpace s = MetricSpace::from_json(j.at("space"));
  if (s.kind == SpaceKind::Lp)
    return make_lp_mean_map(s, j.value("K", 1.0), j.value("p", 2.0));
  return make_map(s);
}

Point barycenter_points(const BarycentricMap& map,
                        const std::vector<Point>& pts,
                        const std::vector<double>& w) {
  check_weights(pts, w);
  double total = 0;
  for (double wi : w) total += wi;
  std::vector<double> wn(w);
  for (double& wi : wn) wi /= total;
  DiscreteMeasure mu = merge_duplicates(map.space, pts, wn);
  switch (map.kind) {
    case MapKind::VectorMean:
      return vector_mean(map.space, mu.support, mu.w);
    case MapKind::TreeExact:
      return tree_barycenter(map.space, mu.support, mu.w);
    case MapKind::HyperbolicKarcher:
      return hyperbolic_karcher(map.space, mu.support, mu.w);
  }
  throw check_error("barycenter: unreachable");
}

Point barycenter(const BarycentricMap& map, const DiscreteMeasure& mu) {
  return barycenter_points(map, mu.support, mu.w);
}

Point conditional_barycenter(const BarycentricMap& map,
                             const std::vector<Point>& pts,
                             const std::vector<double>& w,
                             const std::vector<int>& subset) {
  require(!subset.empty(), "conditional barycenter: empty atom");
  std::vector<Point> sp;
  std::vector<double> sw;
  for (int i : subset) {
    require(i >= 0 && i < static_cast<int>(pts.size()),
            "conditional barycenter: index out of range");
    sp.push_back(pts[i]);
    sw.push_back(w[i]);
  }
  return barycenter_points(map, sp, sw);
}

BarycentricCheck check_barycentric(const BarycentricMap& map, int trials,
                                   std::uint64_t seed) {
  require(trials >= 1, "check: trials must be >= 1");
  const MetricSpace& s = map.space;
  Rng rng(seed, 2);
  BarycentricCheck out;
  auto random_measure = [&](int maxpts) {
    const int k = 1 + static_cast<int>(rng.index(maxpts));
    std::vector<Point> pts(k);
    std::vector<double> w(k);
    double total = 0;
    for (int i = 0; i < k; ++i) {
      pts[i] = s.sample(rng);
      w[i] = rng.uniform(0.1, 1.0);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
    return merge_duplicates(s, pts, w);
  };
  for (int trial = 0; trial < trials; ++trial) {
    const DiscreteMeasure mu = random_measure(5);
    const Point b = barycenter(map, mu);
    const Point x = s.sample(rng);
    double lhs_tail = 0, rhs = 0;
    for (size_t i = 0; i < mu.support.size(); ++i) {
      lhs_tail += mu.w[i] * powp(s.dist(b, mu.support[i]), map.p);
      rhs += mu.w[i] * powp(s.dist(x, mu.support[i]), map.p);
    }
    const double lhs =
        powp(s.dist(x, b), map.p) + lhs_tail / powp(map.K, map.p);
    out.worst_p_residual = std::max(out.worst_p_residual, lhs - rhs);

    const DiscreteMeasure nu = random_measure(5);
    const double wp = wasserstein(s, mu, nu, map.p).value;
    if (wp > 1e-9) {
      const double dd = s.dist(b, barycenter(map, nu));
      out.worst_wp_ratio = std::max(out.worst_wp_ratio, dd / wp);
    }
    const Point z = s.sample(rng);
    const Point bz = barycenter_points(map, {z}, {1.0});
    out.worst_delta_residual = std::max(out.worst_delta_residual,
                                        s.dist(z, bz));
    ++out.samples;
  }
  return out;
}

double calibrate_K(const BarycentricMap& map, int trials,
                   std::uint64_t seed) {
  require(trials >= 1, "calibrate: trials must be >= 1");
  const MetricSpace& s = map.space;
  Rng rng(seed, 3);
  double worst = 1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int k = 1 + static_cast<int>(rng.index(5));
    std::vector<Point> pts(k);
    std::vector<double> w(k);
    double total = 0;
    for (int i = 0; i < k; ++i) {
      pts[i] = s.sample(rng);
      w[i] = rng.uniform(0.1, 1.0);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
    const DiscreteMeasure mu = merge_duplicates(s, pts, w);
    const Point b = barycenter(map, mu);
    const Point x = s.sample(rng);
    double tail = 0, rhs = 0;
    for (size_t i = 0; i < mu.support.size(); ++i) {
      tail += mu.w[i] * powp(s.dist(b, mu.support[i]), map.p);
      rhs += mu.w[i] * powp(s.dist(x, mu.support[i]), map.p);
    }
    const double slack = rhs - powp(s.dist(x, b), map.p);
    if (tail <= 1e-15) continue;
    if (slack <= 0) return kInf;
    worst = std::max(worst, std::pow(tail / slack, 1.0 / map.p));
  }
  return worst;
}

}  // namespace barylab
