#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "barylab/extension.hpp"
#include "barylab/markov.hpp"

using namespace barylab;

namespace {

Eigen::VectorXd ev(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

std::vector<Point> grid_points(Rng& rng, int n, int dim) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> c(dim);
    for (double& x : c) x = rng.uniform(-1, 1);
    out.push_back(Point::vec(c));
  }
  return out;
}

}  // namespace

TEST_CASE("target norms") {
  const TargetSpace e = TargetSpace::euclidean(3);
  CHECK(e.norm(ev({3, 0, 4})) == doctest::Approx(5.0));

  const TargetSpace y = TargetSpace::y_theta(Eigen::MatrixXd::Identity(2, 2), 1.0);
  // |v|_1 / 2^(1/4) + |v|_2
  CHECK(y.norm(ev({1, 0})) == doctest::Approx(1.0 / std::pow(2.0, 0.25) + 1.0));
  CHECK(y.dist(ev({1, 0}), ev({1, 0})) == 0.0);

  Rng rng(3, 0);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd a = ev({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const Eigen::VectorXd b = ev({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    CHECK(y.norm(a + b) <= y.norm(a) + y.norm(b) + 1e-12);
    CHECK(y.dist(a, b) == doctest::Approx(y.dist(b, a)));
  }

  const TargetSpace back = TargetSpace::from_json(y.to_json());
  CHECK(back.norm(ev({0.3, -0.7})) == doctest::Approx(y.norm(ev({0.3, -0.7}))));
}

TEST_CASE("instances compute the anchor lipschitz constant") {
  const MetricSpace x1 = MetricSpace::euclidean(1);
  const ExtensionInstance inst = make_instance(
      x1, {Point::vec({0}), Point::vec({1}), Point::vec({2})}, {0, 2},
      TargetSpace::euclidean(1), {ev({0}), ev({4})});
  CHECK(inst.lip == doctest::Approx(2.0));
  CHECK(lip_on_anchors(inst) == doctest::Approx(2.0));

  // duplicate anchors and mismatched value dimensions are rejected
  CHECK_THROWS_AS(make_instance(x1, {Point::vec({0}), Point::vec({1})}, {0, 0},
                                TargetSpace::euclidean(1), {ev({0}), ev({1})}),
                  input_error);
  CHECK_THROWS_AS(make_instance(x1, {Point::vec({0}), Point::vec({1})}, {0, 1},
                                TargetSpace::euclidean(1),
                                {ev({0}), ev({1, 2})}),
                  input_error);

  const ExtensionInstance back = instance_from_json(instance_to_json(inst));
  CHECK(back.lip == doctest::Approx(inst.lip));
  CHECK(back.S.size() == inst.S.size());
  CHECK(back.anchors == inst.anchors);
}

TEST_CASE("nearest-anchor rounding in degenerate cases") {
  // single row, single net point: every term collapses
  const RoundReport one =
      round_core(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Ones(1, 1),
                 Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1), 2.0);
  CHECK(one.w == std::vector<int>{0});
  CHECK(one.lhs_b == 0.0);
  CHECK(one.lhs_c == 0.0);
  CHECK(one.bound == 0.0);

  // identical net points keep every distance at zero
  const MetricSpace e2 = MetricSpace::euclidean(2);
  const std::vector<Point> z(3, Point::vec({0.5, 0.5}));
  const ReversibleChain c = generate_chain("random_reversible", 4, 2);
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(4, 3, 1.0 / 3.0);
  const RoundReport r =
      round_to_net(e2, z, B, cesaro_auto(c, 2), c.pi, 2.0);
  CHECK(r.lhs_b == 0.0);
  CHECK(r.lhs_c == 0.0);
}

TEST_CASE("rounding holds its certified bound on random instances") {
  const MetricSpace e3 = MetricSpace::euclidean(3);
  Rng rng(43, 0);
  for (double p : {1.0, 2.0, 4.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.index(4));
      const int m = 2 + static_cast<int>(rng.index(4));
      const std::vector<Point> z = grid_points(rng, m, 3);
      Eigen::MatrixXd B(n, m);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j)
          B(i, j) = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
        if (B.row(i).sum() <= 1e-9) B(i, rng.index(m)) = 1.0;
        B.row(i) /= B.row(i).sum();
      }
      const ReversibleChain c =
          generate_chain("random_reversible", n, rng.raw());
      const RoundReport r = round_to_net(e3, z, B, cesaro_auto(c, 3), c.pi, p);
      for (int i = 0; i < n; ++i) {
        CHECK(r.w[i] >= 0);
        CHECK(r.w[i] < m);
      }
      CHECK(r.lhs_b <= r.bound + 1e-8 * (1 + r.bound));
      CHECK(r.lhs_c <= r.bound + 1e-8 * (1 + r.bound));
      CHECK(r.bound == doctest::Approx(powp(3.0, p) * r.rhs_base));
    }
  }
}

TEST_CASE("weighted certificates") {
  const MetricSpace sX = MetricSpace::euclidean(2);
  Rng rng(47, 0);

  SUBCASE("zero weights are vacuous") {
    const std::vector<Point> S = grid_points(rng, 6, 2);
    const ExtensionInstance inst =
        make_instance(sX, S, {0, 1, 2}, TargetSpace::euclidean(2),
                      {ev({0, 0}), ev({1, 0}), ev({0, 1})});
    const HCertificate h = build_h_certificate(
        inst, Eigen::MatrixXd::Zero(6, 6), 2.0, 1.0, std::sqrt(17.0));
    CHECK(h.pass);
    CHECK(h.vacuous);
    CHECK(h.goal_lhs == 0.0);
  }

  SUBCASE("random weights pass the goal inequality") {
    for (int trial = 0; trial < 10; ++trial) {
      const std::vector<Point> S = grid_points(rng, 7, 2);
      std::vector<Eigen::VectorXd> f;
      for (int r = 0; r < 3; ++r)
        f.push_back(ev({rng.uniform(-1, 1), rng.uniform(-1, 1)}));
      const ExtensionInstance inst =
          make_instance(sX, S, {0, 1, 2}, TargetSpace::euclidean(2), f);
      Eigen::MatrixXd H(7, 7);
      for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) H(i, j) = H(j, i) = rng.uniform();
      const HCertificate h =
          build_h_certificate(inst, H, 2.0, 1.0, std::sqrt(17.0));
      CHECK(h.pass);
      CHECK_FALSE(h.vacuous);
      CHECK(h.goal_lhs <= h.goal_rhs + 1e-9 * (1 + h.goal_rhs));
      CHECK(h.full_lhs <= h.full_rhs + 1e-9 * (1 + h.full_rhs));
      CHECK(h.epsilon > 0.0);
      CHECK(h.t >= 2);
      CHECK(h.tau >= 1);
      // the report is serializable and echoes the block sizes
      const json j = hcert_to_json(h);
      CHECK(j.at("m").get<int>() == 3);
      CHECK(j.at("n").get<int>() == 4);
    }
  }

  SUBCASE("a zero cross block still yields a certificate") {
    const std::vector<Point> S = grid_points(rng, 6, 2);
    const ExtensionInstance inst =
        make_instance(sX, S, {0, 1}, TargetSpace::euclidean(2),
                      {ev({0, 0}), ev({1, 1})});
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(6, 6);
    // only the free-free block carries weight
    for (int i = 2; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) H(i, j) = H(j, i) = 1.0;
    const HCertificate h =
        build_h_certificate(inst, H, 2.0, 1.0, std::sqrt(17.0));
    CHECK(h.pass);
    // epsilon is floored against the geometric cross energy, never zero
    CHECK(h.epsilon > 0.0);
    CHECK(h.epsilon <= 0.5);
  }

  SUBCASE("bad weight matrices are rejected") {
    const std::vector<Point> S = grid_points(rng, 5, 2);
    const ExtensionInstance inst =
        make_instance(sX, S, {0, 1}, TargetSpace::euclidean(2),
                      {ev({0, 0}), ev({1, 1})});
    CHECK_THROWS_AS(
        build_h_certificate(inst, Eigen::MatrixXd::Zero(4, 4), 2.0, 1.0, 2.0),
        input_error);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(5, 5);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(build_h_certificate(inst, asym, 2.0, 1.0, 2.0),
                    input_error);
  }
}

TEST_CASE("minimal extension levels") {
  const MetricSpace x1 = MetricSpace::euclidean(1);

  SUBCASE("anchors only: the level is the lipschitz constant") {
    const ExtensionInstance inst = make_instance(
        x1, {Point::vec({0}), Point::vec({2})}, {0, 1},
        TargetSpace::euclidean(1), {ev({0}), ev({3})});
    const ExtensionResult r = min_lipschitz_extension(inst, 3e-5);
    CHECK(std::abs(r.L - 1.5) <= 1e-4);
    CHECK(r.F[0](0) == doctest::Approx(0.0));
    CHECK(r.F[1](0) == doctest::Approx(3.0));
    CHECK(r.worst_violation <= 3e-5 * (1 + r.L));
  }

  SUBCASE("real targets agree with the closed form") {
    const ExtensionInstance inst = make_instance(
        x1, {Point::vec({0}), Point::vec({2}), Point::vec({1})}, {0, 1},
        TargetSpace::euclidean(1), {ev({0}), ev({2})});
    const auto F = mcshane_extend(inst);
    CHECK(F[2](0) == doctest::Approx(1.0));
    const ExtensionResult r = min_lipschitz_extension(inst, 3e-5);
    CHECK(std::abs(r.L - 1.0) <= 1e-4);
    // a 1-lipschitz interpolation must hit the midpoint value
    CHECK(std::abs(r.F[2](0) - 1.0) <= 1e-3);
  }

  SUBCASE("into the plane from three anchors") {
    const MetricSpace x2 = MetricSpace::euclidean(2);
    Rng rng(53, 0);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Point> S = grid_points(rng, 6, 2);
      std::vector<Eigen::VectorXd> f;
      for (int r = 0; r < 3; ++r) f.push_back(ev({S[r].x[0], S[r].x[1]}));
      // f is the identity on the anchors: an isometric extension exists
      const ExtensionInstance inst =
          make_instance(x2, S, {0, 1, 2}, TargetSpace::euclidean(2), f);
      const ExtensionResult r = min_lipschitz_extension(inst, 1e-4);
      CHECK(r.L <= inst.lip + 2e-3 * (1 + inst.lip));
      CHECK(r.L >= inst.lip - 1e-4 * (1 + inst.lip));
    }
  }

  SUBCASE("adding points never lowers the level") {
    const MetricSpace x2 = MetricSpace::euclidean(2);
    Rng rng(59, 0);
    std::vector<Point> S = grid_points(rng, 4, 2);
    const ExtensionInstance small =
        make_instance(x2, S, {0, 1, 2}, TargetSpace::euclidean(1),
                      {ev({0.0}), ev({0.7}), ev({-0.4})});
    const double l_small = min_lipschitz_extension(small, 1e-4).L;
    std::vector<Point> S2 = S;
    S2.push_back(Point::vec({0.1, 0.2}));
    S2.push_back(Point::vec({-0.3, 0.4}));
    const ExtensionInstance big =
        make_instance(x2, S2, {0, 1, 2}, TargetSpace::euclidean(1),
                      {ev({0.0}), ev({0.7}), ev({-0.4})});
    const double l_big = min_lipschitz_extension(big, 1e-4).L;
    CHECK(l_big >= l_small - 1e-3 * (1 + l_small));
  }
}
