#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "barylab/spectral.hpp"

using namespace barylab;

namespace {

std::vector<Point> line_pts(const std::vector<double>& xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(Point::vec({x}));
  return out;
}

}  // namespace

TEST_CASE("safe ratio conventions") {
  CHECK(safe_ratio(0, 0) == 0.0);
  CHECK(safe_ratio(2, 0) == kInf);
  CHECK(safe_ratio(1, 4) == doctest::Approx(0.25));
}

TEST_CASE("analytic gap values") {
  const ReversibleChain flat =
      make_symmetric_chain(Eigen::MatrixXd::Constant(5, 5, 0.2));
  CHECK(gamma_plus_analytic(flat) == doctest::Approx(1.0));
  CHECK(gamma_plus_analytic(generate_chain("cycle", 2, 0)) == kInf);
  // second eigenvalue 2a - 1 = 1/2 gives gamma = 2
  Eigen::MatrixXd sticky(2, 2);
  sticky << 0.75, 0.25,
            0.25, 0.75;
  CHECK(gamma_plus_analytic(make_symmetric_chain(sticky)) ==
        doctest::Approx(2.0));
}

TEST_CASE("fixed-configuration ratio") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  const ReversibleChain two = generate_chain("cycle", 2, 0);
  // spectral witness of the eigenvalue -1 has zero denominator
  const std::vector<Point> x = line_pts({1, -1});
  const std::vector<Point> y = line_pts({-1, 1});
  CHECK(gamma_plus_fixed(e1, two, x, y, 2.0) == kInf);
  // same points on both sides: 2 / 4
  CHECK(gamma_plus_fixed(e1, two, x, x, 2.0) == doctest::Approx(0.5));

  // degree-p homogeneity makes the ratio scale invariant
  const std::vector<Point> sx = line_pts({3, -3});
  CHECK(gamma_plus_fixed(e1, two, sx, sx, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("search approaches the analytic value") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  const ReversibleChain c = generate_chain("path_holding", 4, 0);
  const double exact = gamma_plus_analytic(c);
  const GammaSearch gs = gamma_plus_search(e1, c, 2.0, 120, 77);
  CHECK(gs.gamma <= exact + 1e-6);
  CHECK(gs.gamma >= 0.95 * exact);
  // the reported witness reproduces the reported value
  CHECK(gamma_plus_fixed(e1, c, gs.x, gs.y, 2.0) ==
        doctest::Approx(gs.gamma).epsilon(1e-9));

  const ReversibleChain flat =
      make_symmetric_chain(Eigen::MatrixXd::Constant(5, 5, 0.2));
  const GammaSearch gf = gamma_plus_search(e1, flat, 2.0, 60, 3);
  CHECK(gf.gamma <= 1.0 + 1e-6);
  CHECK(gf.gamma >= 0.95);
}

TEST_CASE("beta root and the contraction bound") {
  // K = 2, p = 2: beta^2 + 4 (beta - 1)^2 = 4 has root 8/5
  CHECK(beta_p(2.0, 2.0) == doctest::Approx(1.6).epsilon(1e-10));
  CHECK(beta_p(1.0, 2.0) == doctest::Approx(1.0));
  const double b3 = beta_p(2.0, 3.0);
  CHECK(std::abs(powp(b3, 3) + 8 * powp(b3 - 1, 3) - 8) <= 1e-10);

  // K = 1, p = 2 collapses to sqrt((g-1)/(g+1))
  for (double g : {1.0, 1.5, 3.0, 10.0})
    CHECK(lambda_bound_from_gamma(g, 1.0, 2.0) ==
          doctest::Approx(std::sqrt((g - 1) / (g + 1))).epsilon(1e-12));
  CHECK(lambda_bound_from_gamma(kInf, 1.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("markov type at t = 1 is an identity") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const ReversibleChain c = generate_chain("random_reversible", 5, 31);
  Rng rng(31, 2);
  std::vector<Point> x;
  for (int i = 0; i < 5; ++i) x.push_back(e2.sample(rng));
  const MarkovTypeCheck chk = markov_type_check(e2, c, x, 2.0, 1, 1.0);
  CHECK(std::abs(chk.residual) <= 1e-12 * (1 + chk.rhs));
  CHECK(chk.lhs == doctest::Approx(chk.rhs).epsilon(1e-12));
}

TEST_CASE("half-snowflake has markov type 2 with constant one") {
  const MetricSpace half = snowflake(MetricSpace::euclidean(2), 0.5);
  Rng rng(41, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.index(5));
    const ReversibleChain c =
        generate_chain("random_symmetric", n, rng.raw());
    std::vector<Point> x;
    for (int i = 0; i < n; ++i) x.push_back(half.sample(rng));
    for (long long t : {1LL, 2LL, 5LL}) {
      const MarkovTypeCheck chk = markov_type_check(half, c, x, 2.0, t, 1.0);
      CHECK(chk.residual <= 1e-9 * (1 + chk.rhs));
    }
  }
}

TEST_CASE("markov operator, distances, and global barycenter") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const BarycentricMap map = make_map(e2);
  const ReversibleChain c = generate_chain("random_reversible", 4, 19);
  Rng rng(19, 2);
  std::vector<Point> f;
  for (int i = 0; i < 4; ++i) f.push_back(e2.sample(rng));

  const std::vector<Point> Tf = apply_markov_operator(map, c.A, f);
  for (int i = 0; i < 4; ++i) {
    double ex = 0, ey = 0;
    for (int j = 0; j < 4; ++j) {
      ex += c.A(i, j) * f[j].x[0];
      ey += c.A(i, j) * f[j].x[1];
    }
    CHECK(e2.dist(Tf[i], Point::vec({ex, ey})) <= 1e-12);
  }

  CHECK(lpn_dist(e2, c.pi, f, f, 2.0) == 0.0);
  const Point g = global_barycenter(map, c.pi, f);
  double gx = 0, gy = 0;
  for (int i = 0; i < 4; ++i) {
    gx += c.pi(i) * f[i].x[0];
    gy += c.pi(i) * f[i].x[1];
  }
  CHECK(e2.dist(g, Point::vec({gx, gy})) <= 1e-12);
}

TEST_CASE("lambda estimate finds the flip invariance of the two-cycle") {
  const BarycentricMap map = make_map(MetricSpace::euclidean(1));
  const ReversibleChain two = generate_chain("cycle", 2, 0);
  const LambdaEstimate est = lambda_estimate(map, two, two.A, 2.0, 20, 7);
  CHECK(est.lambda == doctest::Approx(1.0).epsilon(1e-9));

  const ReversibleChain flat =
      make_symmetric_chain(Eigen::MatrixXd::Constant(4, 4, 0.25));
  const LambdaEstimate ez = lambda_estimate(map, flat, flat.A, 2.0, 20, 7);
  CHECK(ez.lambda <= 1e-9);
}

TEST_CASE("calculus report ties the pieces together") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  const ReversibleChain c = generate_chain("path_holding", 4, 0);
  const CalculusReport r = calculus_report(e1, c, 2.0, 2, 1.0, 1.0, 30, 11);
  CHECK(r.analytic);
  CHECK(r.gamma == doctest::Approx(gamma_plus_analytic(c)).epsilon(1e-12));
  CHECK(r.lambda_bound ==
        doctest::Approx(std::sqrt((r.gamma - 1) / (r.gamma + 1))).epsilon(1e-12));
  CHECK(r.cesaro_envelope ==
        doctest::Approx(20.0 * std::max(1.0, r.gamma / 2.0)).epsilon(1e-12));
  CHECK(r.gamma_ces <= r.cesaro_envelope + 1e-6);
  CHECK(r.gamma_pow <= r.iterate_upper + 1e-6);
  CHECK(r.utilization <= 1.0 + 1e-9);

  const json j = calculus_to_json(r);
  CHECK(j.at("gamma").get<double>() == doctest::Approx(r.gamma));
  CHECK(j.at("t").get<long long>() == 2);
}
