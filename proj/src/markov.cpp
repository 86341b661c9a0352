#include "barylab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace barylab {

namespace {

// clamp rounding dust and renormalize each row to mass one
void sanitize_rows(Eigen::MatrixXd& M, double tol) {
  const int n = static_cast<int>(M.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ensure(M(i, j) > -tol, "stochastic matrix: negative entry");
      if (M(i, j) < 0) M(i, j) = 0;
    }
    const double s = M.row(i).sum();
    ensure(std::abs(s - 1.0) <= tol, "stochastic matrix: row mass drifted");
    M.row(i) /= s;
  }
}

}  // namespace

ReversibleChain make_chain(Eigen::MatrixXd A, Eigen::VectorXd pi) {
  const int n = static_cast<int>(A.rows());
  require(n >= 1 && A.cols() == n, "chain: A must be square and nonempty");
  require(pi.size() == n, "chain: pi size mismatch");
  for (int i = 0; i < n; ++i) {
    require(pi(i) > -1e-15, "chain: pi must be nonnegative");
    if (pi(i) < 0) pi(i) = 0;
    for (int j = 0; j < n; ++j) {
      require(A(i, j) > -1e-12, "chain: A must be nonnegative");
      if (A(i, j) < 0) A(i, j) = 0;
    }
    const double s = A.row(i).sum();
    require(std::abs(s - 1.0) <= 1e-9, "chain: rows of A must sum to 1");
    A.row(i) /= s;
  }
  const double ps = pi.sum();
  require(std::abs(ps - 1.0) <= 1e-9, "chain: pi must sum to 1");
  pi /= ps;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      require(std::abs(pi(i) * A(i, j) - pi(j) * A(j, i)) <= 1e-9,
              "chain: detailed balance fails");
  return ReversibleChain{std::move(A), std::move(pi)};
}

ReversibleChain make_symmetric_chain(Eigen::MatrixXd A) {
  const int n = static_cast<int>(A.rows());
  require(n >= 1, "chain: empty matrix");
  require((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "chain: uniform pi requires a symmetric matrix");
  return make_chain(std::move(A),
                    Eigen::VectorXd::Constant(n, 1.0 / n));
}

Eigen::MatrixXd chain_power(const ReversibleChain& c, long long t) {
  require(t >= 0, "power: t must be >= 0");
  const int n = c.size();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd base = c.A;
  while (t > 0) {
    if (t & 1) {
      result = result * base;
      sanitize_rows(result, 1e-9);
    }
    t >>= 1;
    if (t > 0) {
      base = base * base;
      sanitize_rows(base, 1e-9);
    }
  }
  return result;
}

Eigen::MatrixXd cesaro(const ReversibleChain& c, long long t) {
  require(t >= 1, "cesaro: t must be >= 1");
  require(t <= 1 << 20, "cesaro: t too large for the iterative route");
  Eigen::MatrixXd pow = c.A;
  Eigen::MatrixXd acc = c.A;
  for (long long s = 2; s <= t; ++s) {
    pow = pow * c.A;
    acc += pow;
  }
  acc /= static_cast<double>(t);
  sanitize_rows(acc, 1e-9);
  return acc;
}

double cesaro_weight(double lambda, long long t) {
  lambda = std::clamp(lambda, -1.0, 1.0);
  if (lambda > 1.0 - 1e-15) return 1.0;
  if (lambda == 0.0) return 0.0;
  const double td = static_cast<double>(t);
  if (lambda > 0) {
    // lambda (1 - lambda^t) / (t (1 - lambda)) via expm1 for stability
    const double x = -td * std::log(lambda);
    return lambda * (-std::expm1(-x)) / (td * (1.0 - lambda));
  }
  return lambda * (1.0 - std::pow(lambda, td)) / (td * (1.0 - lambda));
}

SpectralDecomposition decompose(const ReversibleChain& c) {
  const int n = c.size();
  SpectralDecomposition d;
  for (int i = 0; i < n; ++i)
    if (c.pi(i) > 0) d.support.push_back(i);
  const int m = static_cast<int>(d.support.size());
  ensure(m >= 1, "decompose: empty support");
  d.sqrt_pi.resize(m);
  for (int i = 0; i < m; ++i) d.sqrt_pi(i) = std::sqrt(c.pi(d.support[i]));
  Eigen::MatrixXd S(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      S(i, j) = d.sqrt_pi(i) * c.A(d.support[i], d.support[j]) / d.sqrt_pi(j);
  S = 0.5 * (S + S.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  ensure(es.info() == Eigen::Success, "decompose: eigensolver failed");
  // SelfAdjointEigenSolver sorts ascending; flip to descending
  d.lambda = es.eigenvalues().reverse();
  d.U = es.eigenvectors().rowwise().reverse();
  ensure(std::abs(d.lambda(0) - 1.0) <= 1e-8,
         "decompose: top eigenvalue is not 1");
  return d;
}

Eigen::MatrixXd cesaro_spectral(const ReversibleChain& c, long long t) {
  require(t >= 1, "cesaro: t must be >= 1");
  const int n = c.size();
  SpectralDecomposition d = decompose(c);
  require(static_cast<int>(d.support.size()) == n,
          "cesaro_spectral: needs pi > 0 everywhere");
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k) w(k) = cesaro_weight(d.lambda(k), t);
  Eigen::MatrixXd S = d.U * w.asDiagonal() * d.U.transpose();
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M(i, j) = S(i, j) * d.sqrt_pi(j) / d.sqrt_pi(i);
  sanitize_rows(M, 1e-8);
  return M;
}

Eigen::MatrixXd cesaro_auto(const ReversibleChain& c, long long t) {
  if (t <= 64 || c.pi.minCoeff() <= 0) return cesaro(c, t);
  return cesaro_spectral(c, t);
}

GreenPair green(const ReversibleChain& c, long long t) {
  require(t >= 1, "green: t must be >= 1");
  const int n = c.size();
  const double td = static_cast<double>(t);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  GreenPair g;
  g.G = (I - (1.0 - 1.0 / td) * c.A).partialPivLu().solve(I) / td;
  g.B = g.G - I / td;
  return g;
}

double absolute_gap(const ReversibleChain& c) {
  SpectralDecomposition d = decompose(c);
  double gap = 0;
  for (int k = 1; k < d.lambda.size(); ++k)
    gap = std::max(gap, std::abs(d.lambda(k)));
  // periodic chains put an eigenvalue at -1 exactly; don't let roundoff
  // turn that into a huge-but-finite gamma downstream
  if (gap >= 1.0 - 1e-12) return 1.0;
  return gap;
}

ReversibleChain generate_chain(const std::string& kind, int n,
                               std::uint64_t seed, const json& params) {
  require(n >= 1, "generate: n must be >= 1");
  Rng rng(seed, 1);
  if (kind == "path_holding") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    if (n == 1) {
      A(0, 0) = 1;
    } else {
      A(0, 0) = A(n - 1, n - 1) = 0.5;
      for (int i = 0; i < n; ++i) {
        if (i > 0) A(i, i - 1) = 0.5;
        if (i + 1 < n) A(i, i + 1) = 0.5;
      }
    }
    return make_symmetric_chain(A);
  }
  if (kind == "cycle") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    if (n == 1) {
      A(0, 0) = 1;
    } else {
      for (int i = 0; i < n; ++i) {
        A(i, (i + 1) % n) += 0.5;
        A(i, (i + n - 1) % n) += 0.5;
      }
    }
    return make_symmetric_chain(A);
  }
  if (kind == "random_symmetric") {
    // off-diagonal weights scaled so every diagonal keeps mass >= 0.2;
    // eigenvalues may still be negative
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) W(i, j) = W(j, i) = rng.uniform();
    double rmax = 0;
    for (int i = 0; i < n; ++i) rmax = std::max(rmax, W.row(i).sum());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    if (rmax > 0) A = W / (1.25 * rmax);
    for (int i = 0; i < n; ++i) A(i, i) = 1.0 - A.row(i).sum();
    return make_symmetric_chain(A);
  }
  if (kind == "random_reversible") {
    // symmetric conductances bounded away from zero: every entry of A
    // and of pi is strictly positive
    Eigen::MatrixXd W(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) W(i, j) = W(j, i) = rng.uniform(0.1, 1.1);
    Eigen::VectorXd s = W.rowwise().sum();
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) A.row(i) = W.row(i) / s(i);
    return make_chain(A, s / s.sum());
  }
  if (kind == "regular_graph") {
    const int d = params.value("d", 3);
    require(d >= 1 && d <= n - 1, "regular_graph: need 1 <= d <= n-1");
    require((static_cast<long long>(n) * d) % 2 == 0,
            "regular_graph: n*d must be even");
    // pairing model: match half-edge stubs, retry until simple
    for (int attempt = 0; attempt < 5000; ++attempt) {
      std::vector<int> stubs;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) stubs.push_back(i);
      for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i)
        std::swap(stubs[i], stubs[rng.index(i + 1)]);
      std::set<std::pair<int, int>> edges;
      bool ok = true;
      for (size_t k = 0; k + 1 < stubs.size() && ok; k += 2) {
        int u = stubs[k], v = stubs[k + 1];
        if (u == v) ok = false;
        else ok = edges.insert({std::min(u, v), std::max(u, v)}).second;
      }
      if (!ok) continue;
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
      for (auto [u, v] : edges) A(u, v) = A(v, u) = 1.0 / d;
      return make_symmetric_chain(A);
    }
    throw input_error("regular_graph: no simple graph found; lower d");
  }
  throw input_error("generate: unknown chain kind '" + kind + "'");
}

json chain_to_json(const ReversibleChain& c) {
  const int n = c.size();
  json A = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(c.A(i, j));
    A.push_back(std::move(row));
  }
  json pi = json::array();
  for (int i = 0; i < n; ++i) pi.push_back(c.pi(i));
  return json{{"n", n}, {"A", std::move(A)}, {"pi", std::move(pi)}};
}

ReversibleChain chain_from_json(const json& j, std::uint64_t default_seed) {
  require(j.is_object(), "chain: expected an object");
  if (j.contains("generate")) {
    const json& spec = j.at("generate");
    require(spec.is_object() && spec.contains("kind") && spec.contains("n"),
            "chain: generate spec needs kind and n");
    const std::uint64_t seed =
        spec.contains("seed") ? spec.at("seed").get<std::uint64_t>()
                              : default_seed;
    return generate_chain(spec.at("kind").get<std::string>(),
                          spec.at("n").get<int>(), seed, spec);
  }
  require(j.contains("A"), "chain: need A or a generate spec");
  const auto rows = j.at("A").get<std::vector<std::vector<double>>>();
  const int n = static_cast<int>(rows.size());
  require(n >= 1, "chain: A is empty");
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(rows[i].size()) == n, "chain: A is not square");
    for (int j2 = 0; j2 < n; ++j2) A(i, j2) = rows[i][j2];
  }
  if (j.contains("pi")) {
    const auto p = j.at("pi").get<std::vector<double>>();
    require(static_cast<int>(p.size()) == n, "chain: pi size mismatch");
    return make_chain(A, Eigen::Map<const Eigen::VectorXd>(p.data(), n));
  }
  return make_symmetric_chain(A);
}

}  // namespace barylab
