#include "barylab/transport.hpp"

#include <algorithm>
#include <cmath>

namespace barylab {

DiscreteMeasure make_measure(const MetricSpace& s, std::vector<Point> support,
                             std::vector<double> w) {
  require(!support.empty(), "measure: empty support");
  require(support.size() == w.size(), "measure: support/weight size mismatch");
  double sum = 0;
  for (double x : w) {
    require(x > 0, "measure: weights must be strictly positive");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= 1e-12,
          "measure: weights must sum to 1 (within 1e-12)");
  for (auto& pt : support) {
    s.check_point(pt);
    pt = s.canonical(pt);
  }
  for (size_t i = 0; i < support.size(); ++i)
    for (size_t j = i + 1; j < support.size(); ++j)
      require(!(support[i] == support[j]), "measure: duplicate support points");
  // renormalize exactly so downstream sums start from 1
  for (double& x : w) x /= sum;
  return DiscreteMeasure{std::move(support), std::move(w)};
}

DiscreteMeasure merge_duplicates(const MetricSpace& s,
                                 std::vector<Point> support,
                                 std::vector<double> w) {
  require(support.size() == w.size(), "measure: support/weight size mismatch");
  std::vector<Point> sup;
  std::vector<double> ww;
  for (size_t i = 0; i < support.size(); ++i) {
    if (w[i] == 0.0) continue;
    Point p = s.canonical(support[i]);
    bool merged = false;
    for (size_t k = 0; k < sup.size(); ++k)
      if (sup[k] == p) {
        ww[k] += w[i];
        merged = true;
        break;
      }
    if (!merged) {
      sup.push_back(p);
      ww.push_back(w[i]);
    }
  }
  return make_measure(s, std::move(sup), std::move(ww));
}

DiscreteMeasure measure_from_json(const MetricSpace& s, const json& j) {
  require(j.is_object() && j.contains("support") && j.contains("weights"),
          "measure: expected {support, weights}");
  std::vector<Point> sup;
  for (const auto& pj : j.at("support")) sup.push_back(s.point_from_json(pj));
  return make_measure(s, std::move(sup),
                      j.at("weights").get<std::vector<double>>());
}

json measure_to_json(const MetricSpace& s, const DiscreteMeasure& m) {
  json sup = json::array();
  for (const auto& p : m.support) sup.push_back(s.point_to_json(p));
  return json{{"support", sup}, {"weights", m.w}};
}

namespace {

// Transportation simplex state. Nodes 0..m-1 are the mu atoms, m..m+n-1 the
// nu atoms. The basis is a spanning tree with exactly m+n-1 arcs.
struct Simplex {
  int m, n;
  const std::vector<std::vector<long double>>& c;
  std::vector<double> a, b;

  struct Arc {
    int r, s;
    long double flow;
  };
  std::vector<Arc> basis;
  std::vector<std::vector<int>> in_basis;  // index into basis or -1

  Simplex(int m_, int n_, const std::vector<std::vector<long double>>& cost,
          std::vector<double> a_, std::vector<double> b_)
      : m(m_), n(n_), c(cost), a(std::move(a_)), b(std::move(b_)) {
    in_basis.assign(m, std::vector<int>(n, -1));
    northwest();
  }

  void add_arc(int r, int s, long double f) {
    in_basis[r][s] = static_cast<int>(basis.size());
    basis.push_back({r, s, f});
  }

  // Northwest-corner initial basic feasible solution. The staircase is
  // forced to end at the (m-1,n-1) corner so the basis is always a spanning
  // tree with exactly m+n-1 arcs (degenerate zero flows allowed).
  void northwest() {
    std::vector<long double> ra(a.begin(), a.end()), rb(b.begin(), b.end());
    int r = 0, s = 0;
    for (;;) {
      const long double f = std::max(std::min(ra[r], rb[s]), 0.0L);
      add_arc(r, s, f);
      ra[r] -= f;
      rb[s] -= f;
      if (static_cast<int>(basis.size()) == m + n - 1) break;
      if (r == m - 1)
        ++s;
      else if (s == n - 1)
        ++r;
      else if (ra[r] <= rb[s])
        ++r;
      else
        ++s;
    }
  }

  // Solve u_r + v_s = c_rs over the basis tree (u_0 = 0).
  void potentials(std::vector<long double>& u, std::vector<long double>& v) const {
    const int N = m + n;
    std::vector<std::vector<std::pair<int, int>>> adj(N);  // (neighbor, arc)
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
      adj[basis[k].r].push_back({m + basis[k].s, k});
      adj[m + basis[k].s].push_back({basis[k].r, k});
    }
    u.assign(m, 0);
    v.assign(n, 0);
    std::vector<char> seen(N, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (auto [nxt, k] : adj[cur]) {
        if (seen[nxt]) continue;
        seen[nxt] = 1;
        const auto& arc = basis[k];
        if (nxt >= m)
          v[nxt - m] = c[arc.r][arc.s] - u[arc.r];
        else
          u[nxt] = c[arc.r][arc.s] - v[arc.s];
        stack.push_back(nxt);
      }
    }
  }

  // Path between two nodes in the basis tree, as a list of arc indices.
  std::vector<int> tree_path(int from, int to) const {
    const int N = m + n;
    std::vector<std::vector<std::pair<int, int>>> adj(N);
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
      adj[basis[k].r].push_back({m + basis[k].s, k});
      adj[m + basis[k].s].push_back({basis[k].r, k});
    }
    std::vector<int> parent_node(N, -1), parent_arc(N, -1);
    std::vector<char> seen(N, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      if (cur == to) break;
      for (auto [nxt, k] : adj[cur])
        if (!seen[nxt]) {
          seen[nxt] = 1;
          parent_node[nxt] = cur;
          parent_arc[nxt] = k;
          stack.push_back(nxt);
        }
    }
    std::vector<int> path;
    for (int cur = to; cur != from; cur = parent_node[cur])
      path.push_back(parent_arc[cur]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  // One pivot with entering arc (r,s). Returns false if the basis is
  // unchanged (cannot happen for a tree basis, kept for safety).
  void pivot(int er, int es) {
    // cycle: entering arc plus tree path from node m+es back to node er;
    // arcs along that path alternate -, +, -, ...
    std::vector<int> path = tree_path(m + es, er);
    long double delta = -1;
    int leave = -1;
    for (size_t i = 0; i < path.size(); i += 2) {
      const long double f = basis[path[i]].flow;
      if (leave < 0 || f < delta ||
          (f == delta && path[i] < leave)) {
        delta = f;
        leave = path[i];
      }
    }
    for (size_t i = 0; i < path.size(); ++i) {
      if (i % 2 == 0)
        basis[path[i]].flow -= delta;
      else
        basis[path[i]].flow += delta;
    }
    const Arc leaving = basis[leave];
    in_basis[leaving.r][leaving.s] = -1;
    basis[leave] = {er, es, delta};
    in_basis[er][es] = leave;
  }

  int solve(long double eps) {
    int iters = 0;
    const int cap = 2000 + 50 * (m + n) * (m + n);
    std::vector<long double> u, v;
    for (;;) {
      potentials(u, v);
      // Bland: first arc (lexicographic) with negative reduced cost
      int er = -1, es = -1;
      for (int r = 0; r < m && er < 0; ++r)
        for (int s = 0; s < n; ++s) {
          if (in_basis[r][s] >= 0) continue;
          if (c[r][s] - u[r] - v[s] < -eps) {
            er = r;
            es = s;
            break;
          }
        }
      if (er < 0) return iters;
      pivot(er, es);
      ensure(++iters <= cap, "wasserstein: simplex iteration cap exceeded");
    }
  }

  // Recompute basic flows exactly from the marginals by leaf elimination.
  void polish() {
    const int N = m + n;
    std::vector<long double> rem(N);
    for (int r = 0; r < m; ++r) rem[r] = a[r];
    for (int s = 0; s < n; ++s) rem[m + s] = b[s];
    std::vector<int> deg(N, 0);
    std::vector<char> done_arc(basis.size(), 0), done_node(N, 0);
    for (const auto& arc : basis) {
      ++deg[arc.r];
      ++deg[m + arc.s];
    }
    std::vector<int> leaves;
    for (int i = 0; i < N; ++i)
      if (deg[i] == 1) leaves.push_back(i);
    std::vector<std::vector<std::pair<int, int>>> adj(N);
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
      adj[basis[k].r].push_back({m + basis[k].s, k});
      adj[m + basis[k].s].push_back({basis[k].r, k});
    }
    while (!leaves.empty()) {
      const int leaf = leaves.back();
      leaves.pop_back();
      if (done_node[leaf]) continue;
      done_node[leaf] = 1;
      for (auto [nxt, k] : adj[leaf]) {
        if (done_arc[k]) continue;
        done_arc[k] = 1;
        basis[k].flow = rem[leaf];
        rem[leaf] = 0;
        rem[nxt] -= basis[k].flow;
        if (--deg[nxt] == 1) leaves.push_back(nxt);
      }
    }
  }
};

}  // namespace

WassersteinResult wasserstein(const MetricSpace& s, const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p) {
  require(p >= 1.0 && p <= 64.0, "wasserstein: p must be in [1,64]");
  const int m = mu.size(), n = nu.size();
  std::vector<std::vector<long double>> cost(m, std::vector<long double>(n));
  long double cmax = 0;
  for (int r = 0; r < m; ++r)
    for (int t = 0; t < n; ++t) {
      const long double d = s.dist(mu.support[r], nu.support[t]);
      cost[r][t] = powl(d, static_cast<long double>(p));
      cmax = std::max(cmax, cost[r][t]);
    }
  Simplex sx(m, n, cost, mu.w, nu.w);
  const long double eps = 1e-14L * (1 + cmax);
  WassersteinResult res;
  res.p = p;
  res.iterations = sx.solve(eps);
  sx.polish();

  res.coupling.pi.assign(m, std::vector<double>(n, 0.0));
  long double total = 0;
  for (const auto& arc : sx.basis) {
    res.coupling.pi[arc.r][arc.s] = static_cast<double>(arc.flow);
    total += arc.flow * cost[arc.r][arc.s];
  }
  res.coupling.cost = static_cast<double>(total);
  res.value = static_cast<double>(powl(std::max<long double>(total, 0), 1.0L / p));

  // dual certificate from the final potentials
  std::vector<long double> u, v;
  sx.potentials(u, v);
  long double worst = 0;
  for (int r = 0; r < m; ++r)
    for (int t = 0; t < n; ++t)
      worst = std::min(worst, cost[r][t] - u[r] - v[t]);
  res.dual_violation = static_cast<double>(worst);
  ensure(res.dual_violation >= -1e-10 * (1 + static_cast<double>(cmax)),
         "wasserstein: optimality certificate failed");
  return res;
}

}  // namespace barylab
