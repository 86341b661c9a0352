#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "barylab/kalton.hpp"

using namespace barylab;

TEST_CASE("instance invariants in the plane") {
  const KaltonInstance inst = build_instance(2, 1.0, 101);
  CHECK_NOTHROW(validate_instance(inst));
  CHECK(inst.a_size() % 2 == 0);
  CHECK(inst.a_size() >= 4);
  CHECK(inst.net_size() <= 25);  // 5^n columns at most

  for (int k = 0; k < inst.a_size(); k += 2) {
    // stored in +/- pairs, unit length, separated
    CHECK((inst.a_pts[k] + inst.a_pts[k + 1]).norm() <= 1e-12);
    CHECK(inst.a_pts[k].norm() == doctest::Approx(1.0));
    CHECK((inst.phi[k] + inst.phi[k + 1]).cwiseAbs().maxCoeff() <= 1e-12);
    // the section really is a preimage of bounded l1 norm
    CHECK((inst.Q * inst.phi[k] - inst.a_pts[k]).cwiseAbs().maxCoeff() <=
          1e-9);
    CHECK(inst.phi[k].lpNorm<1>() <= 2.0 + 1e-9);
  }
  for (int i = 0; i < inst.a_size(); ++i)
    for (int j = i + 1; j < inst.a_size(); ++j)
      CHECK((inst.a_pts[i] - inst.a_pts[j]).norm() > inst.sep_a);

  CHECK(inst.covering_max <= 1.0 + 1e-9);
  CHECK(inst.lp_gap_max <= 1e-9);
  CHECK(inst.a_fill <= inst.sep_a + 1e-12);

  // lookup
  CHECK(inst.point_index(inst.a_pts[1]) == 1);
  Eigen::VectorXd far(2);
  far << 10, 0;
  CHECK(inst.point_index(far) == -1);
}

TEST_CASE("section values and the composite norm") {
  const KaltonInstance inst = build_instance(2, 1.0, 103);
  const TargetSpace Y = inst.target();
  CHECK(Y.kind == TargetSpace::Kind::YTheta);
  CHECK(Y.dim == inst.net_size());

  const Eigen::VectorXd& a = inst.a_pts[0];
  const YThetaPoint fa = f_theta(inst, a);
  CHECK((fa.qx - a).cwiseAbs().maxCoeff() <= 1e-9);
  // oddness
  const YThetaPoint fm = f_theta(inst, inst.a_pts[1]);
  CHECK((fa.x + fm.x).cwiseAbs().maxCoeff() <= 1e-12);
  // norm splits into the scaled l1 part plus the quotient part
  const double nn = Y.norm(fa.x);
  const double scale = std::pow(static_cast<double>(inst.n), inst.theta / 4.0);
  CHECK(nn == doctest::Approx(fa.x.lpNorm<1>() / scale + fa.qx.norm()));
  CHECK(nn <= 2.0 / scale + 1.0 + 1e-9);

  Eigen::VectorXd off(2);
  off << 0.123, 0.456;
  CHECK_THROWS_AS(f_theta(inst, off), input_error);
}

TEST_CASE("holder bound at the endpoint exponent") {
  for (double theta : {1.0, 0.5}) {
    const KaltonInstance inst = build_instance(2, theta, 107);
    const HolderReport h = holder_check(inst, 1.0);
    CHECK(h.bound == doctest::Approx(5.0));
    CHECK(h.max_ratio <= h.bound + 1e-9);
    // tau below theta is rejected
    CHECK_THROWS_AS(holder_check(inst, theta - 0.25), input_error);
  }
}

TEST_CASE("construction rejects out-of-range parameters") {
  CHECK_THROWS_AS(build_instance(1, 1.0, 1), input_error);
  CHECK_THROWS_AS(build_instance(9, 1.0, 1), input_error);
  CHECK_THROWS_AS(build_instance(2, 0.0, 1), input_error);
  CHECK_THROWS_AS(build_instance(2, 1.5, 1), input_error);
}

TEST_CASE("retraction tables") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  Retraction doubling;
  doubling.from = {Point::vec({0}), Point::vec({1})};
  doubling.to = {Point::vec({0}), Point::vec({2})};
  CHECK(retraction_lip(e1, doubling) == doctest::Approx(2.0));

  Retraction split;
  split.from = {Point::vec({0}), Point::vec({0})};
  split.to = {Point::vec({0}), Point::vec({1})};
  CHECK(retraction_lip(e1, split) == kInf);
}

TEST_CASE("retractions transfer certificates") {
  const MetricSpace e1 = MetricSpace::euclidean(1);
  const BarycentricMap map = make_map(e1);
  const ReversibleChain c = generate_chain("cycle", 4, 0);
  const std::vector<Point> x = {Point::vec({0}), Point::vec({1}),
                                Point::vec({2}), Point::vec({3})};
  const CotypeCertificate cert = cotype_construct(map, c, x, 2.0, 3);

  SUBCASE("identity keeps the ratio") {
    Retraction id;
    for (const Point& p : x) {
      id.from.push_back(p);
      id.to.push_back(p);
    }
    for (const Point& p : cert.y) {
      id.from.push_back(p);
      id.to.push_back(p);
    }
    const CotypeCertificate moved = retraction_transfer(map, c, cert, id);
    CHECK(moved.ratio == doctest::Approx(cert.ratio).epsilon(1e-12));
    CHECK(moved.lhs == doctest::Approx(cert.lhs).epsilon(1e-12));
  }

  SUBCASE("snapping y to the configuration recomputes the energy") {
    Retraction snap;
    for (const Point& p : x) {
      snap.from.push_back(p);
      snap.to.push_back(p);
    }
    for (int i = 0; i < 4; ++i) {
      snap.from.push_back(cert.y[i]);
      // nearest configuration point
      int best = 0;
      for (int j = 1; j < 4; ++j)
        if (e1.dist(cert.y[i], x[j]) < e1.dist(cert.y[i], x[best])) best = j;
      snap.to.push_back(x[best]);
    }
    const CotypeCertificate moved = retraction_transfer(map, c, cert, snap);
    double lhs = 0;
    for (int i = 0; i < 4; ++i) {
      int best = 0;
      for (int j = 1; j < 4; ++j)
        if (e1.dist(cert.y[i], x[j]) < e1.dist(cert.y[i], x[best])) best = j;
      lhs += c.pi(i) * powp(e1.dist(x[i], x[best]), 2.0);
    }
    std::vector<Point> ys(4);
    for (int i = 0; i < 4; ++i) {
      int best = 0;
      for (int j = 1; j < 4; ++j)
        if (e1.dist(cert.y[i], x[j]) < e1.dist(cert.y[i], x[best])) best = j;
      ys[i] = x[best];
    }
    lhs += 3.0 * weighted_pair_energy(e1, c.A, c.pi, ys, 2.0);
    CHECK(moved.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(moved.rhs_base == doctest::Approx(cert.rhs_base).epsilon(1e-12));
  }

  SUBCASE("tables must cover the queried points") {
    Retraction partial;
    partial.from = {x[0]};
    partial.to = {x[0]};
    CHECK_THROWS_AS(retraction_transfer(map, c, cert, partial), input_error);
  }
}

TEST_CASE("extension lower bound experiment") {
  const KaltonInstance inst = build_instance(2, 1.0, 109);
  // with no added points everything is an anchor: the level is f's constant
  const LowerReport base = extension_lower_experiment(inst, 0, 1e-3, 7);
  CHECK(base.lip_f > 0.0);
  CHECK(base.ratio == doctest::Approx(1.0).epsilon(5e-3));

  const LowerReport more = extension_lower_experiment(inst, 6, 1e-3, 7);
  CHECK(more.extra == 6);
  CHECK(more.ratio >= 1.0 - 5e-3);
  CHECK(more.lip_f == doctest::Approx(base.lip_f));
}
