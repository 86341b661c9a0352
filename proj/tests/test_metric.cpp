#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "barylab/metric.hpp"

using namespace barylab;

TEST_CASE("euclidean and lp distances") {
  const MetricSpace e3 = MetricSpace::euclidean(3);
  CHECK(e3.dist(Point::vec({0, 0, 0}), Point::vec({3, 4, 0})) == doctest::Approx(5.0));
  CHECK(e3.dist(Point::vec({1, 1, 1}), Point::vec({1, 1, 1})) == 0.0);

  const MetricSpace l15 = MetricSpace::lp(3, 1.5);
  // (1 + 1)^(1/1.5) = 2^(2/3)
  CHECK(l15.dist(Point::vec({0, 0, 0}), Point::vec({1, 1, 0})) ==
        doctest::Approx(std::pow(2.0, 2.0 / 3.0)));

  const MetricSpace l1 = MetricSpace::lp(2, 1.0);
  CHECK(l1.dist(Point::vec({0, 0}), Point::vec({1, -2})) == doctest::Approx(3.0));
}

TEST_CASE("tree metric along a path") {
  // 0 --1-- 1 --2-- 2
  const MetricSpace tr = MetricSpace::tree({{0, 1, 1.0}, {1, 2, 2.0}});
  CHECK(tr.vertex_dist(0, 2) == doctest::Approx(3.0));
  CHECK(tr.vertex_dist(2, 0) == doctest::Approx(3.0));
  CHECK(tr.dist(Point::on_edge(0, 1, 0.3), Point::on_edge(0, 1, 0.7)) ==
        doctest::Approx(0.4));
  // across the middle vertex
  CHECK(tr.dist(Point::on_edge(0, 1, 0.5), Point::on_edge(1, 2, 1.5)) ==
        doctest::Approx(2.0));
  // endpoints snap to vertex form
  const Point snapped = tr.canonical(Point::on_edge(0, 1, 1.0));
  CHECK(tr.dist(snapped, Point::on_edge(1, 1, 0.0)) == 0.0);
  CHECK(snapped.u == snapped.v);
}

TEST_CASE("hyperbolic disk has the closed-form radial distance") {
  const MetricSpace h = MetricSpace::hyperbolic_disk();
  const Point o = Point::vec({0, 0});
  const Point r = Point::vec({0.5, 0});
  // acosh(1 + 0.5/0.75) = acosh(5/3) = log 3
  CHECK(h.dist(o, r) == doctest::Approx(std::log(3.0)));
  CHECK(h.dist(r, o) == doctest::Approx(h.dist(o, r)));
  CHECK_THROWS_AS(h.check_point(Point::vec({1.0, 0.0})), input_error);
}

TEST_CASE("snowflake takes the distance to a power") {
  const MetricSpace half = snowflake(MetricSpace::euclidean(1), 0.5);
  CHECK(half.dist(Point::vec({0}), Point::vec({0.25})) == doctest::Approx(0.5));
  // composing snowflakes multiplies exponents
  const MetricSpace quarter = snowflake(half, 0.5);
  CHECK(quarter.dist(Point::vec({0}), Point::vec({0.0625})) ==
        doctest::Approx(std::pow(0.0625, 0.25)));
  CHECK_THROWS_AS(snowflake(MetricSpace::euclidean(1), 1.5), input_error);
}

TEST_CASE("triangle inequality holds on sampled triples") {
  const std::vector<MetricSpace> spaces = {
      MetricSpace::euclidean(3),
      MetricSpace::lp(3, 1.5),
      MetricSpace::tree({{0, 1, 1.0}, {1, 2, 2.0}, {1, 3, 0.5}}),
      MetricSpace::hyperbolic_disk(),
      snowflake(MetricSpace::euclidean(2), 0.5),
  };
  for (const auto& s : spaces) {
    const MetricValidation v = validate_metric(s, 300, 7);
    CAPTURE(kind_name(s.kind));
    CHECK(v.samples == 300);
    CHECK(v.violations == 0);
  }
}

TEST_CASE("matrix spaces validate at construction") {
  const MetricSpace m =
      MetricSpace::matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  CHECK(m.dist(Point::node(0), Point::node(2)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(m.check_point(Point::node(3)), input_error);
  // triangle violation: d(0,2) = 3 > 1 + 1
  CHECK_THROWS_AS(MetricSpace::matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}),
                  input_error);
  // asymmetric
  CHECK_THROWS_AS(MetricSpace::matrix({{0, 1}, {2, 0}}), input_error);
  // zero off-diagonal needs the pseudometric flag
  CHECK_THROWS_AS(MetricSpace::matrix({{0, 0}, {0, 0}}), input_error);
  const MetricSpace pm = MetricSpace::matrix({{0, 0}, {0, 0}}, true);
  CHECK(pm.dist(Point::node(0), Point::node(1)) == 0.0);
}

TEST_CASE("point membership checks") {
  const MetricSpace e2 = MetricSpace::euclidean(2);
  CHECK_THROWS_AS(e2.check_point(Point::vec({1, 2, 3})), input_error);
  CHECK_THROWS_AS(e2.check_point(Point::node(0)), input_error);
  const MetricSpace tr = MetricSpace::tree({{0, 1, 1.0}});
  CHECK_THROWS_AS(tr.check_point(Point::on_edge(0, 1, 1.5)), input_error);
  CHECK_THROWS_AS(tr.check_point(Point::on_edge(0, 2, 0.5)), input_error);
}

TEST_CASE("sampling stays inside the space") {
  Rng rng(11, 0);
  for (const auto& s : {MetricSpace::euclidean(2), MetricSpace::hyperbolic_disk(),
                        MetricSpace::tree({{0, 1, 2.0}, {1, 2, 1.0}})}) {
    for (int k = 0; k < 50; ++k) {
      const Point p = s.sample(rng);
      CHECK_NOTHROW(s.check_point(p));
      const Point q = s.perturb(p, 0.1, rng);
      CHECK_NOTHROW(s.check_point(q));
    }
  }
}

TEST_CASE("space and point json round trips") {
  const std::vector<MetricSpace> spaces = {
      MetricSpace::euclidean(3),
      MetricSpace::lp(2, 1.5),
      MetricSpace::tree({{0, 1, 1.0}, {1, 2, 2.0}}),
      MetricSpace::hyperbolic_disk(),
      snowflake(MetricSpace::euclidean(2), 0.5),
      MetricSpace::matrix({{0, 1}, {1, 0}}),
  };
  Rng rng(3, 0);
  for (const auto& s : spaces) {
    const MetricSpace back = MetricSpace::from_json(s.to_json());
    CHECK(back.kind == s.kind);
    for (int k = 0; k < 20; ++k) {
      const Point a = s.sample(rng);
      const Point b = s.sample(rng);
      CHECK(back.dist(a, b) == doctest::Approx(s.dist(a, b)));
      const Point a2 = s.point_from_json(s.point_to_json(a));
      CHECK(s.dist(a, a2) <= 1e-12);
    }
  }
}
