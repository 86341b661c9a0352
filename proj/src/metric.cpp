#include "barylab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace barylab {

namespace {

constexpr double kDiskRadiusMax = 1.0 - 1e-9;

double sq(double x) { return x * x; }

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
  return std::sqrt(s);
}

double lq(const std::vector<double>& a, const std::vector<double>& b, double q) {
  if (q == 2.0) return l2(a, b);
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), q);
  return std::pow(s, 1.0 / q);
}

double norm2(const std::vector<double>& a) {
  double s = 0;
  for (double c : a) s += sq(c);
  return std::sqrt(s);
}

// Poincare disk distance, curvature -1.
double hyper_dist(const std::vector<double>& u, const std::vector<double>& v) {
  const double du = 1.0 - sq(u[0]) - sq(u[1]);
  const double dv = 1.0 - sq(v[0]) - sq(v[1]);
  const double e = sq(u[0] - v[0]) + sq(u[1] - v[1]);
  return std::acosh(1.0 + 2.0 * e / (du * dv));
}

}  // namespace

std::string kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Euclidean: return "euclidean";
    case SpaceKind::Lp: return "lp";
    case SpaceKind::Tree: return "tree";
    case SpaceKind::HyperbolicDisk: return "hyperbolic_disk";
    case SpaceKind::Matrix: return "matrix";
  }
  return "?";
}

MetricSpace MetricSpace::euclidean(int dim) {
  require(dim >= 1, "euclidean: dim must be >= 1");
  MetricSpace s;
  s.kind = SpaceKind::Euclidean;
  s.dim = dim;
  return s;
}

MetricSpace MetricSpace::lp(int dim, double p) {
  require(dim >= 1, "lp: dim must be >= 1");
  require(p >= 1.0, "lp: exponent must be >= 1");
  MetricSpace s;
  s.kind = SpaceKind::Lp;
  s.dim = dim;
  s.lp_exponent = p;
  return s;
}

MetricSpace MetricSpace::tree(const std::vector<TreeEdge>& edges) {
  require(!edges.empty(), "tree: needs at least one edge");
  int n = 0;
  for (const auto& e : edges) {
    require(e.u >= 0 && e.v >= 0 && e.u != e.v, "tree: bad edge endpoints");
    require(e.w > 0, "tree: edge weights must be positive");
    n = std::max(n, std::max(e.u, e.v) + 1);
  }
  require(static_cast<int>(edges.size()) == n - 1,
          "tree: edge count must be n-1 (acyclic connected)");
  MetricSpace s;
  s.kind = SpaceKind::Tree;
  s.n_vertices = n;
  s.edges = edges;
  // adjacency + BFS from every vertex; rejects disconnected input
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  s.treedist_.assign(n, std::vector<double>(n, -1.0));
  for (int src = 0; src < n; ++src) {
    auto& d = s.treedist_[src];
    d[src] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
      int cur = q.front();
      q.pop();
      for (auto [nxt, w] : adj[cur])
        if (d[nxt] < 0) {
          d[nxt] = d[cur] + w;
          q.push(nxt);
        }
    }
    for (double v : d) require(v >= 0, "tree: graph is not connected");
  }
  return s;
}

MetricSpace MetricSpace::hyperbolic_disk() {
  MetricSpace s;
  s.kind = SpaceKind::HyperbolicDisk;
  s.dim = 2;
  return s;
}

MetricSpace MetricSpace::matrix(std::vector<std::vector<double>> d,
                                bool pseudometric) {
  const int n = static_cast<int>(d.size());
  require(n >= 1, "matrix: empty distance matrix");
  for (const auto& row : d)
    require(static_cast<int>(row.size()) == n, "matrix: not square");
  for (int i = 0; i < n; ++i) {
    require(std::abs(d[i][i]) <= kTolValidate, "matrix: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      require(d[i][j] >= 0, "matrix: negative entry");
      require(std::abs(d[i][j] - d[j][i]) <= kTolValidate,
              "matrix: not symmetric");
      if (!pseudometric && i != j)
        require(d[i][j] > 0, "matrix: zero off-diagonal (use pseudometric)");
    }
  }
  double scale = 0;
  for (const auto& row : d)
    for (double v : row) scale = std::max(scale, v);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        require(d[i][k] <= d[i][j] + d[j][k] + kTolValidate * (1 + scale),
                "matrix: triangle inequality fails at (" + std::to_string(i) +
                    "," + std::to_string(j) + "," + std::to_string(k) + ")");
  MetricSpace s;
  s.kind = SpaceKind::Matrix;
  s.dmat = std::move(d);
  s.pseudometric = pseudometric;
  return s;
}

void MetricSpace::check_point(const Point& p) const {
  switch (kind) {
    case SpaceKind::Euclidean:
    case SpaceKind::Lp:
      require(static_cast<int>(p.x.size()) == dim,
              "point: wrong dimension for " + kind_name(kind) + " space");
      return;
    case SpaceKind::HyperbolicDisk:
      require(p.x.size() == 2, "point: hyperbolic points are 2-dimensional");
      require(norm2(p.x) <= kDiskRadiusMax,
              "point: outside the open unit disk");
      return;
    case SpaceKind::Matrix:
      require(p.id >= 0 && p.id < static_cast<int>(dmat.size()),
              "point: vertex id out of range");
      return;
    case SpaceKind::Tree: {
      require(p.u >= 0 && p.u < n_vertices && p.v >= 0 && p.v < n_vertices,
              "point: tree endpoints out of range");
      if (p.u == p.v) {
        require(p.t == 0.0, "point: vertex point must have offset 0");
        return;
      }
      bool found = false;
      double w = 0;
      for (const auto& e : edges)
        if ((e.u == p.u && e.v == p.v) || (e.u == p.v && e.v == p.u)) {
          found = true;
          w = e.w;
        }
      require(found, "point: (u,v) is not a tree edge");
      require(p.t >= 0 && p.t <= w, "point: offset outside edge length");
      return;
    }
  }
}

Point MetricSpace::canonical(Point p) const {
  if (kind != SpaceKind::Tree) return p;
  if (p.u == p.v) {
    p.t = 0.0;
    return p;
  }
  double w = 0;
  for (const auto& e : edges)
    if ((e.u == p.u && e.v == p.v) || (e.u == p.v && e.v == p.u)) w = e.w;
  if (p.u > p.v) {
    std::swap(p.u, p.v);
    p.t = w - p.t;
  }
  if (p.t <= 0.0) return Point::on_edge(p.u, p.u, 0.0);
  if (p.t >= w) return Point::on_edge(p.v, p.v, 0.0);
  return p;
}

double MetricSpace::vertex_dist(int a, int b) const {
  require(kind == SpaceKind::Tree, "vertex_dist: not a tree space");
  return treedist_[a][b];
}

double MetricSpace::base_dist(const Point& a, const Point& b) const {
  switch (kind) {
    case SpaceKind::Euclidean:
      return l2(a.x, b.x);
    case SpaceKind::Lp:
      return lq(a.x, b.x, lp_exponent);
    case SpaceKind::HyperbolicDisk:
      return hyper_dist(a.x, b.x);
    case SpaceKind::Matrix:
      return dmat[a.id][b.id];
    case SpaceKind::Tree: {
      const Point p = canonical(a), q = canonical(b);
      if (p.u == q.u && p.v == q.v) {
        if (p.u == p.v) return 0.0;
        return std::abs(p.t - q.t);
      }
      auto len = [&](const Point& e) {
        for (const auto& ed : edges)
          if ((ed.u == e.u && ed.v == e.v) || (ed.u == e.v && ed.v == e.u))
            return ed.w;
        return 0.0;
      };
      auto exits = [&](const Point& e) {
        // (vertex, cost-to-reach-it) pairs through which paths leave e
        std::vector<std::pair<int, double>> out;
        if (e.u == e.v) {
          out.push_back({e.u, 0.0});
        } else {
          out.push_back({e.u, e.t});
          out.push_back({e.v, len(e) - e.t});
        }
        return out;
      };
      double best = kInf;
      for (auto [va, ca] : exits(p))
        for (auto [vb, cb] : exits(q))
          best = std::min(best, ca + treedist_[va][vb] + cb);
      return best;
    }
  }
  return 0.0;
}

double MetricSpace::dist(const Point& a, const Point& b) const {
  const double d = base_dist(a, b);
  return alpha == 1.0 ? d : std::pow(d, alpha);
}

Point MetricSpace::sample(Rng& rng) const {
  switch (kind) {
    case SpaceKind::Euclidean:
    case SpaceKind::Lp: {
      // uniform direction, radius biased toward the shell; any fixed law
      // works for the harnesses
      std::vector<double> x(dim);
      double n2 = 0;
      for (auto& c : x) {
        c = rng.gaussian();
        n2 += c * c;
      }
      const double r = std::pow(rng.uniform(), 1.0 / dim) / std::sqrt(std::max(n2, 1e-300));
      for (auto& c : x) c *= r;
      return Point::vec(std::move(x));
    }
    case SpaceKind::HyperbolicDisk: {
      // hyperbolic ball of radius 1 about the origin
      const double ang = rng.uniform(0, 2 * M_PI);
      const double r = std::tanh(0.5) * std::sqrt(rng.uniform());
      return Point::vec({r * std::cos(ang), r * std::sin(ang)});
    }
    case SpaceKind::Matrix:
      return Point::node(rng.index(static_cast<int>(dmat.size())));
    case SpaceKind::Tree: {
      const auto& e = edges[rng.index(static_cast<int>(edges.size()))];
      return canonical(Point::on_edge(e.u, e.v, rng.uniform(0, e.w)));
    }
  }
  return Point{};
}

Point MetricSpace::perturb(const Point& p, double step, Rng& rng) const {
  switch (kind) {
    case SpaceKind::Euclidean:
    case SpaceKind::Lp: {
      Point q = p;
      const int c = rng.index(dim);
      q.x[c] += step * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      // project back into the radius-1 ball (search configurations live there)
      const double n = (kind == SpaceKind::Euclidean) ? norm2(q.x)
                                                      : lq(q.x, std::vector<double>(q.x.size(), 0.0), lp_exponent);
      if (n > 1.0)
        for (auto& v : q.x) v /= n;
      return q;
    }
    case SpaceKind::HyperbolicDisk: {
      Point q = p;
      const int c = rng.index(2);
      q.x[c] += step * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      const double n = norm2(q.x);
      const double cap = std::tanh(0.5);
      if (n > cap)
        for (auto& v : q.x) v *= cap / n;
      return q;
    }
    case SpaceKind::Matrix:
      return Point::node(rng.index(static_cast<int>(dmat.size())));
    case SpaceKind::Tree: {
      Point q = canonical(p);
      if (rng.uniform() < 0.25) return sample(rng);
      if (q.u == q.v) {
        // step into a random incident edge
        std::vector<const TreeEdge*> inc;
        for (const auto& e : edges)
          if (e.u == q.u || e.v == q.u) inc.push_back(&e);
        const auto* e = inc[rng.index(static_cast<int>(inc.size()))];
        const double t = std::min(step, e->w) * rng.uniform();
        return canonical(e->u == q.u ? Point::on_edge(e->u, e->v, t)
                                     : Point::on_edge(e->v, e->u, t));
      }
      double w = 0;
      for (const auto& e : edges)
        if ((e.u == q.u && e.v == q.v) || (e.u == q.v && e.v == q.u)) w = e.w;
      double t = q.t + step * w * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      t = std::clamp(t, 0.0, w);
      return canonical(Point::on_edge(q.u, q.v, t));
    }
  }
  return p;
}

json MetricSpace::point_to_json(const Point& p) const {
  switch (kind) {
    case SpaceKind::Euclidean:
    case SpaceKind::Lp:
    case SpaceKind::HyperbolicDisk:
      return json(p.x);
    case SpaceKind::Matrix:
      return json(p.id);
    case SpaceKind::Tree: {
      const Point c = canonical(p);
      if (c.u == c.v) return json(c.u);
      return json::array({c.u, c.v, c.t});
    }
  }
  return json();
}

Point MetricSpace::point_from_json(const json& j) const {
  Point p;
  switch (kind) {
    case SpaceKind::Euclidean:
    case SpaceKind::Lp:
    case SpaceKind::HyperbolicDisk: {
      require(j.is_array(), "point: expected coordinate array");
      p = Point::vec(j.get<std::vector<double>>());
      break;
    }
    case SpaceKind::Matrix: {
      require(j.is_number_integer(), "point: expected vertex id");
      p = Point::node(j.get<int>());
      break;
    }
    case SpaceKind::Tree: {
      if (j.is_number_integer()) {
        p = Point::on_edge(j.get<int>(), j.get<int>(), 0.0);
      } else {
        require(j.is_array() && j.size() == 3, "point: expected id or [u,v,t]");
        p = Point::on_edge(j[0].get<int>(), j[1].get<int>(), j[2].get<double>());
      }
      p = canonical(p);
      break;
    }
  }
  check_point(p);
  return p;
}

json MetricSpace::to_json() const {
  json j;
  j["kind"] = kind_name(kind);
  switch (kind) {
    case SpaceKind::Euclidean:
      j["dim"] = dim;
      break;
    case SpaceKind::Lp:
      j["dim"] = dim;
      j["p"] = lp_exponent;
      break;
    case SpaceKind::HyperbolicDisk:
      break;
    case SpaceKind::Matrix:
      j["d"] = dmat;
      if (pseudometric) j["pseudometric"] = true;
      break;
    case SpaceKind::Tree: {
      json e = json::array();
      for (const auto& ed : edges) e.push_back(json::array({ed.u, ed.v, ed.w}));
      j["edges"] = e;
      break;
    }
  }
  if (alpha != 1.0) j["alpha"] = alpha;
  return j;
}

MetricSpace MetricSpace::from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "space: missing 'kind'");
  const std::string k = j.at("kind").get<std::string>();
  MetricSpace s;
  if (k == "euclidean") {
    require(j.contains("dim"), "space: euclidean needs 'dim'");
    s = euclidean(j.at("dim").get<int>());
  } else if (k == "lp") {
    require(j.contains("dim") && j.contains("p"), "space: lp needs 'dim','p'");
    s = lp(j.at("dim").get<int>(), j.at("p").get<double>());
  } else if (k == "hyperbolic_disk") {
    s = hyperbolic_disk();
  } else if (k == "matrix") {
    require(j.contains("d"), "space: matrix needs 'd'");
    s = matrix(j.at("d").get<std::vector<std::vector<double>>>(),
               j.value("pseudometric", false));
  } else if (k == "tree") {
    require(j.contains("edges"), "space: tree needs 'edges'");
    std::vector<TreeEdge> es;
    for (const auto& e : j.at("edges")) {
      require(e.is_array() && (e.size() == 2 || e.size() == 3),
              "space: tree edge must be [u,v] or [u,v,w]");
      TreeEdge ed;
      ed.u = e[0].get<int>();
      ed.v = e[1].get<int>();
      ed.w = e.size() == 3 ? e[2].get<double>() : 1.0;
      es.push_back(ed);
    }
    s = tree(es);
  } else {
    throw input_error("space: unknown kind '" + k + "'");
  }
  if (j.contains("alpha")) s = snowflake(s, j.at("alpha").get<double>());
  return s;
}

MetricSpace snowflake(const MetricSpace& s, double a) {
  require(a > 0 && a <= 1.0, "snowflake: exponent must be in (0,1]");
  MetricSpace out = s;
  out.alpha = s.alpha * a;
  return out;
}

MetricValidation validate_metric(const MetricSpace& s, int sample_size,
                                 std::uint64_t seed) {
  require(sample_size >= 1, "validate_metric: sample_size must be >= 1");
  Rng rng(seed, 0xA11CE);
  MetricValidation r;
  r.samples = sample_size;
  for (int k = 0; k < sample_size; ++k) {
    Point a = s.sample(rng), b = s.sample(rng), c = s.sample(rng);
    const double dab = s.dist(a, b), dbc = s.dist(b, c), dac = s.dist(a, c);
    const double scale = std::max({dab, dbc, dac, 1.0});
    const double excess = dac - dab - dbc;
    if (excess > kTolValidate * scale) {
      ++r.violations;
      if (excess > r.worst_excess) {
        r.worst_excess = excess;
        r.worst_triple = {a, b, c};
      }
    }
    // symmetry + identity spot checks come along for free
    ensure(std::abs(dab - s.dist(b, a)) <= kTolValidate * scale,
           "validate_metric: asymmetric distance");
    ensure(s.dist(a, a) <= kTolValidate, "validate_metric: d(a,a) != 0");
  }
  return r;
}

}  // namespace barylab
