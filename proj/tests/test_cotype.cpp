#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "barylab/cotype.hpp"
#include "barylab/spectral.hpp"

using namespace barylab;

namespace {

double line_objective(const ReversibleChain& c, const std::vector<double>& x,
                      const std::vector<double>& y, double p, double t) {
  double acc = 0;
  for (int i = 0; i < c.size(); ++i) {
    acc += c.pi(i) * powp(std::abs(y[i] - x[i]), p);
    for (int j = 0; j < c.size(); ++j)
      if (c.A(i, j) > 0)
        acc += t * c.pi(i) * c.A(i, j) * powp(std::abs(y[i] - y[j]), p);
  }
  return acc;
}

std::vector<Point> sample_config(const MetricSpace& s, int n, Rng& rng) {
  std::vector<Point> x;
  for (int i = 0; i < n; ++i) x.push_back(s.sample(rng));
  return x;
}

}  // namespace

TEST_CASE("weighted pair energy sums what it says") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  Eigen::MatrixXd M(2, 2);
  M << 0.25, 0.75,
       0.5, 0.5;
  Eigen::VectorXd pi(2);
  pi << 0.4, 0.6;
  const std::vector<Point> x = {Point::vec({0}), Point::vec({2})};
  // 0.4*0.75*4 + 0.6*0.5*4
  CHECK(weighted_pair_energy(e1, M, pi, x, 2.0) == doctest::Approx(2.4));
}

TEST_CASE("degenerate certificates") {
  const BarycentricMap map = make_map(MetricSpace::euclidean(2));
  const ReversibleChain one =
      make_symmetric_chain(Eigen::MatrixXd::Identity(1, 1));
  const CotypeCertificate single =
      cotype_construct(map, one, {Point::vec({1, 1})}, 2.0, 4);
  CHECK(single.lhs == 0.0);
  CHECK(single.ratio == 1.0);

  const ReversibleChain c = generate_chain("cycle", 4, 0);
  const std::vector<Point> same(4, Point::vec({0.3, -0.2}));
  const CotypeCertificate flat = cotype_construct(map, c, same, 2.0, 3);
  CHECK(flat.lhs <= 1e-18);
  CHECK(flat.ratio == 1.0);
}

TEST_CASE("positive chains take the averaged-kernel shortcut") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const BarycentricMap map = make_map(e2);
  const ReversibleChain c = generate_chain("random_reversible", 4, 51);
  Rng rng(51, 2);
  const std::vector<Point> x = sample_config(e2, 4, rng);
  const CotypeCertificate cert = cotype_construct(map, c, x, 2.0, 5);
  CHECK(cert.epsilon == 0.0);

  // with no smoothing the construction is the Cesaro average of x
  const Eigen::MatrixXd ces = cesaro_auto(c, 5);
  for (int i = 0; i < 4; ++i) {
    double ax = 0, ay = 0;
    for (int j = 0; j < 4; ++j) {
      ax += ces(i, j) * x[j].x[0];
      ay += ces(i, j) * x[j].x[1];
    }
    CHECK(e2.dist(cert.y[i], Point::vec({ax, ay})) <= 1e-10);
  }

  // reported sides match a direct recomputation
  double lhs = 0;
  for (int i = 0; i < 4; ++i)
    lhs += c.pi(i) * powp(e2.dist(x[i], cert.y[i]), 2.0);
  lhs += 5.0 * weighted_pair_energy(e2, c.A, c.pi, cert.y, 2.0);
  CHECK(cert.lhs == doctest::Approx(lhs).epsilon(1e-10));
  CHECK(cert.rhs_base ==
        doctest::Approx(weighted_pair_energy(e2, ces, c.pi, x, 2.0))
            .epsilon(1e-10));
}

TEST_CASE("chains with zero transitions get smoothed yet stay certified") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const BarycentricMap map = make_map(e2);
  const ReversibleChain c = generate_chain("cycle", 4, 0);
  Rng rng(9, 2);
  for (long long t : {1LL, 3LL, 8LL}) {
    const std::vector<Point> x = sample_config(e2, 4, rng);
    const CotypeCertificate cert = cotype_construct(map, c, x, 2.0, t);
    CHECK(cert.epsilon > 0.0);
    CHECK(cert.epsilon <= 0.5);
    CHECK(cert.rhs_base ==
          doctest::Approx(
              weighted_pair_energy(e2, cesaro_auto(c, t), c.pi, x, 2.0))
              .epsilon(1e-10));
    // (4 Gamma K)^p + 1 at Gamma = K = 1
    CHECK(cert.ratio <= 17.0 + 1e-8);
  }
}

TEST_CASE("layer recursion matches matrix powers on coordinates") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  const BarycentricMap map = make_map(e1);
  const ReversibleChain c = generate_chain("random_reversible", 3, 4);
  const std::vector<Point> x = {Point::vec({0}), Point::vec({1}),
                                Point::vec({5})};
  const int t = 4;
  const auto layers = dp_layers(map, c.A, x, t);
  REQUIRE(static_cast<int>(layers.size()) == t + 1);
  Eigen::VectorXd v(3);
  v << 0, 1, 5;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd cur = v;
  for (int r = 1; r <= t; ++r) {
    cur = c.A * cur;
    for (int i = 0; i < 3; ++i)
      CHECK(layers[r][i].x[0] == doctest::Approx(cur(i)).epsilon(1e-12));
    acc += cur;
  }
  const auto y = cotype_y_from_layers(map, layers);
  for (int i = 0; i < 3; ++i)
    CHECK(y[i].x[0] == doctest::Approx(acc(i) / t).epsilon(1e-12));
}

TEST_CASE("martingale decomposition validates and is tight") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const BarycentricMap map = make_map(e2);
  const ReversibleChain c = generate_chain("path_holding", 3, 0);
  Rng rng(33, 2);
  const std::vector<Point> x = sample_config(e2, 3, rng);
  const MartingaleInstance m = dp_martingale(map, c, x, 2);
  CHECK_NOTHROW(validate_martingale(map, m));
  for (int k = 0; k < 5; ++k) {
    const Point z = e2.sample(rng);
    CHECK(pisier_residual(map, m, z, 1.0, 2.0) <= 1e-8);
  }

  // single-level instance collapses to an identity
  MartingaleInstance triv;
  triv.mu = {0.25, 0.75};
  triv.atom = {{0, 0}};
  const Point z0 = Point::vec({0.5, 0.5});
  triv.Z = {{z0, z0}};
  CHECK_NOTHROW(validate_martingale(map, triv));
  CHECK(std::abs(pisier_residual(map, triv, Point::vec({2, 0}), 1.0, 2.0)) <=
        1e-12);
}

TEST_CASE("corrupted martingales are rejected") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const BarycentricMap map = make_map(e2);
  const ReversibleChain c = generate_chain("path_holding", 3, 0);
  Rng rng(35, 2);
  const std::vector<Point> x = sample_config(e2, 3, rng);
  {
    MartingaleInstance m = dp_martingale(map, c, x, 2);
    m.Z[1][0].x[0] += 0.25;
    CHECK_THROWS_AS(validate_martingale(map, m), check_error);
  }
  {
    MartingaleInstance m = dp_martingale(map, c, x, 2);
    m.Z.back()[0].x[1] -= 0.4;
    CHECK_THROWS_AS(validate_martingale(map, m), check_error);
  }
  {
    // breaking the level-0 partition is a structural error, not a failed law
    MartingaleInstance m = dp_martingale(map, c, x, 2);
    m.atom[0][0] = 1;
    CHECK_THROWS_AS(validate_martingale(map, m), input_error);
  }
}

TEST_CASE("martingale residuals in the hyperbolic disk") {
  const BarycentricMap map = make_map(MetricSpace::hyperbolic_disk());
  const ReversibleChain c = generate_chain("path_holding", 3, 0);
  Rng rng(37, 2);
  const std::vector<Point> x = sample_config(map.space, 3, rng);
  const MartingaleInstance m = dp_martingale(map, c, x, 2);
  CHECK_NOTHROW(validate_martingale(map, m));
  for (int k = 0; k < 4; ++k)
    CHECK(pisier_residual(map, m, map.space.sample(rng), 1.0, 2.0) <= 1e-8);
}

TEST_CASE("power energy is dominated by the cesaro energy") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  Rng rng(39, 2);
  for (const char* kind : {"path_holding", "cycle"}) {
    for (int n : {5, 6}) {
      const ReversibleChain c = generate_chain(kind, n, 0);
      const std::vector<Point> x = sample_config(e1, n, rng);
      for (double p : {1.0, 2.0, 3.0}) {
        for (long long t : {1LL, 3LL, 7LL}) {
          const DominationReport r = domination_report(e1, c, x, p, t);
          CHECK(r.pow_ratio <= powp(2.0, p) + 1e-9);
          CHECK(r.e_pow ==
                doctest::Approx(weighted_pair_energy(e1, chain_power(c, t),
                                                     c.pi, x, p))
                    .epsilon(1e-10));
          CHECK(r.e_ces ==
                doctest::Approx(weighted_pair_energy(e1, cesaro_auto(c, t),
                                                     c.pi, x, p))
                    .epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("resolvent-kernel certificate recomputes both sides") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const ReversibleChain c = generate_chain("random_reversible", 4, 61);
  Rng rng(61, 2);
  const std::vector<Point> x = sample_config(e2, 4, rng);
  const std::vector<Point> y = sample_config(e2, 4, rng);
  const long long t = 3;
  const BallCotypeResult b = ball_cotype_certificate(e2, c, x, y, 2.0, t);
  double lhs = 0;
  for (int i = 0; i < 4; ++i)
    lhs += c.pi(i) * powp(e2.dist(x[i], y[i]), 2.0);
  lhs += (t - 1) * weighted_pair_energy(e2, c.A, c.pi, y, 2.0);
  CHECK(b.lhs == doctest::Approx(lhs).epsilon(1e-10));
  CHECK(b.rhs ==
        doctest::Approx(
            weighted_pair_energy(e2, green(c, t).B, c.pi, x, 2.0))
            .epsilon(1e-10));
  CHECK(b.ratio == doctest::Approx(safe_ratio(b.lhs, b.rhs)).epsilon(1e-12));
}

TEST_CASE("line experiment: exact solvers and growth") {
  SUBCASE("p = 1 solves an exact program") {
    const PathCotypeResult r = path_cotype_experiment(2, 1.0);
    CHECK(r.method == "lp");
    CHECK(r.t == 2);  // ceil(1 * 2^1)
    const ReversibleChain c = generate_chain("path_holding", 2, 0);
    const std::vector<double> x = {1.0, 2.0};
    CHECK(r.lhs_min ==
          doctest::Approx(line_objective(c, x, r.y, 1.0, 2.0)).epsilon(1e-9));
    // never worse than leaving y = x
    CHECK(r.lhs_min <= line_objective(c, x, x, 1.0, 2.0) + 1e-9);
  }

  SUBCASE("p = 2 satisfies the stationarity system") {
    const PathCotypeResult r = path_cotype_experiment(5, 2.0);
    CHECK(r.method == "closed_form");
    const ReversibleChain c = generate_chain("path_holding", 5, 0);
    const int n = 5;
    Eigen::VectorXd xv(n), yv(n);
    for (int i = 0; i < n; ++i) {
      xv(i) = i + 1;
      yv(i) = r.y[i];
    }
    const Eigen::MatrixXd sys =
        Eigen::MatrixXd::Identity(n, n) +
        2.0 * static_cast<double>(r.t) *
            (Eigen::MatrixXd::Identity(n, n) - c.A);
    CHECK((sys * yv - xv).cwiseAbs().maxCoeff() <= 1e-9);
  }

  SUBCASE("fractional p improves on the identity guess") {
    const PathCotypeResult r = path_cotype_experiment(4, 1.5);
    CHECK(r.method == "subgradient");
    const ReversibleChain c = generate_chain("path_holding", 4, 0);
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    CHECK(r.lhs_min <=
          line_objective(c, x, x, 1.5, static_cast<double>(r.t)) + 1e-9);
  }

  SUBCASE("the ratio grows with the path length") {
    const double r4 = path_cotype_experiment(4, 1.0).ratio;
    const double r8 = path_cotype_experiment(8, 1.0).ratio;
    CHECK(r8 > r4);
  }

  CHECK_THROWS_AS(path_cotype_experiment(4, 3.0), input_error);
  CHECK_THROWS_AS(path_cotype_experiment(1, 1.0), input_error);
}
