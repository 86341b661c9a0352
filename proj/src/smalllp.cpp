#include "barylab/smalllp.hpp"

#include <algorithm>
#include <cmath>

namespace barylab::lp {

namespace {

// Tableau with artificial columns kept through phase 2 (barred from
// entering) so the duals can be read off their reduced costs.
struct Tableau {
  int m, n;                 // rows, structural columns
  std::vector<double> T;    // (m+1) x (n+m+1); last row = objective
  std::vector<int> basis;   // basic column per row
  std::vector<int> rowsign; // +1/-1 applied to the original row
  int width() const { return n + m + 1; }
  double& at(int r, int cidx) { return T[r * width() + cidx]; }
  double at(int r, int cidx) const { return T[r * width() + cidx]; }
};

// price out the objective row against the current basis
void reduce_objective(Tableau& t, const std::vector<double>& cost) {
  const int W = t.width();
  for (int j = 0; j < W; ++j) t.at(t.m, j) = j < static_cast<int>(cost.size()) ? cost[j] : 0.0;
  t.at(t.m, W - 1) = 0.0;
  for (int r = 0; r < t.m; ++r) {
    const double cb = cost[t.basis[r]];
    if (cb == 0.0) continue;
    for (int j = 0; j < W; ++j) t.at(t.m, j) -= cb * t.at(r, j);
  }
}

void pivot(Tableau& t, int pr, int pc) {
  const int W = t.width();
  const double piv = t.at(pr, pc);
  for (int j = 0; j < W; ++j) t.at(pr, j) /= piv;
  for (int r = 0; r <= t.m; ++r) {
    if (r == pr) continue;
    const double f = t.at(r, pc);
    if (f == 0.0) continue;
    for (int j = 0; j < W; ++j) t.at(r, j) -= f * t.at(pr, j);
  }
  t.basis[pr] = pc;
}

// Bland: entering = lowest-index column with negative reduced cost;
// leaving = lowest-index basic column among the ratio-test minima.
int simplex_loop(Tableau& t, int enter_limit, double eps, int max_iter) {
  const int W = t.width();
  int iters = 0;
  for (;;) {
    int pc = -1;
    for (int j = 0; j < enter_limit; ++j)
      if (t.at(t.m, j) < -eps) {
        pc = j;
        break;
      }
    if (pc < 0) return iters;
    int pr = -1;
    double best = 0;
    for (int r = 0; r < t.m; ++r) {
      const double a = t.at(r, pc);
      if (a <= eps) continue;
      const double ratio = t.at(r, W - 1) / a;
      if (pr < 0 || ratio < best ||
          (ratio == best && t.basis[r] < t.basis[pr])) {
        pr = r;
        best = ratio;
      }
    }
    ensure(pr >= 0, "lp: unbounded objective");
    pivot(t, pr, pc);
    ensure(++iters <= max_iter, "lp: iteration cap exceeded");
  }
}

}  // namespace

Solution solve_standard(const std::vector<std::vector<double>>& A,
                        const std::vector<double>& b,
                        const std::vector<double>& c, int max_iter) {
  const int m = static_cast<int>(A.size());
  require(m >= 1, "lp: empty constraint system");
  const int n = static_cast<int>(A[0].size());
  require(static_cast<int>(b.size()) == m && static_cast<int>(c.size()) == n,
          "lp: dimension mismatch");
  for (const auto& row : A)
    require(static_cast<int>(row.size()) == n, "lp: ragged constraint matrix");

  double scale = 1.0;
  for (const auto& row : A)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (double v : b) scale = std::max(scale, std::abs(v));
  const double eps = 1e-11 * scale;

  Tableau t;
  t.m = m;
  t.n = n;
  t.T.assign((m + 1) * (n + m + 1), 0.0);
  t.basis.resize(m);
  t.rowsign.resize(m);
  const int W = t.width();
  for (int r = 0; r < m; ++r) {
    const int sg = b[r] >= 0 ? 1 : -1;
    t.rowsign[r] = sg;
    for (int j = 0; j < n; ++j) t.at(r, j) = sg * A[r][j];
    t.at(r, n + r) = 1.0;  // artificial
    t.at(r, W - 1) = sg * b[r];
    t.basis[r] = n + r;
  }

  Solution sol;
  // phase 1: minimize the artificial sum
  std::vector<double> phase1(n + m, 0.0);
  for (int j = n; j < n + m; ++j) phase1[j] = 1.0;
  reduce_objective(t, phase1);
  sol.iterations += simplex_loop(t, n, eps, max_iter);
  double art = 0;
  for (int r = 0; r < m; ++r)
    if (t.basis[r] >= n) art += t.at(r, W - 1);
  if (art > 1e-8 * (1 + scale)) {
    sol.feasible = false;
    return sol;
  }
  sol.feasible = true;
  // drive any degenerate artificials out of the basis when possible
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] < n) continue;
    int pc = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(t.at(r, j)) > eps) {
        pc = j;
        break;
      }
    if (pc >= 0) pivot(t, r, pc);
    // else: redundant row; the artificial stays basic at zero
  }

  // phase 2
  std::vector<double> phase2(n + m, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = c[j];
  reduce_objective(t, phase2);
  sol.iterations += simplex_loop(t, n, eps, max_iter);

  sol.optimal = true;
  sol.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (t.basis[r] < n) sol.x[t.basis[r]] = t.at(r, W - 1);
  sol.objective = 0;
  for (int j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
  // duals: reduced cost of artificial j is -y_j (cost 0 in phase 2),
  // up to the sign flip applied to row j
  sol.dual.assign(m, 0.0);
  double by = 0;
  for (int r = 0; r < m; ++r) {
    sol.dual[r] = -t.at(t.m, n + r) * t.rowsign[r];
    by += sol.dual[r] * b[r];
  }
  sol.gap = std::abs(sol.objective - by);
  return sol;
}

Solution min_l1_preimage(const std::vector<std::vector<double>>& Q,
                         const std::vector<double>& v) {
  const int m = static_cast<int>(Q.size());
  require(m >= 1 && !Q[0].empty(), "min_l1: empty system");
  const int N = static_cast<int>(Q[0].size());
  // x = xp - xm, minimize sum(xp + xm)
  std::vector<std::vector<double>> A(m, std::vector<double>(2 * N));
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < N; ++j) {
      A[r][j] = Q[r][j];
      A[r][N + j] = -Q[r][j];
    }
  std::vector<double> c(2 * N, 1.0);
  Solution s = solve_standard(A, v, c);
  if (!s.feasible) return s;
  std::vector<double> x(N);
  for (int j = 0; j < N; ++j) x[j] = s.x[j] - s.x[N + j];
  s.x = std::move(x);
  return s;
}

}  // namespace barylab::lp
