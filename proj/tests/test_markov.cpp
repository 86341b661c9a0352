#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "barylab/markov.hpp"

using namespace barylab;

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("generators produce the expected kernels") {
  const ReversibleChain path = generate_chain("path_holding", 3, 0);
  Eigen::MatrixXd expect(3, 3);
  expect << 0.5, 0.5, 0.0,
            0.5, 0.0, 0.5,
            0.0, 0.5, 0.5;
  CHECK(max_abs_diff(path.A, expect) <= 1e-15);
  CHECK(path.pi.isApproxToConstant(1.0 / 3.0, 1e-15));

  const ReversibleChain two = generate_chain("cycle", 2, 0);
  Eigen::MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  CHECK(max_abs_diff(two.A, flip) <= 1e-15);

  // same seed, same chain
  const ReversibleChain a = generate_chain("random_reversible", 5, 42);
  const ReversibleChain b = generate_chain("random_reversible", 5, 42);
  CHECK(max_abs_diff(a.A, b.A) == 0.0);
}

TEST_CASE("construction validates stochasticity and detailed balance") {
  Eigen::MatrixXd A(2, 2);
  A << 0.5, 0.5,
       0.25, 0.75;
  Eigen::VectorXd bad = Eigen::VectorXd::Constant(2, 0.5);
  CHECK_THROWS_AS(make_chain(A, bad), input_error);
  Eigen::VectorXd good(2);
  good << 1.0 / 3.0, 2.0 / 3.0;  // (1/3)(1/2) = (2/3)(1/4)
  CHECK_NOTHROW(make_chain(A, good));

  Eigen::MatrixXd rowless(2, 2);
  rowless << 0.5, 0.4,
             0.4, 0.5;
  CHECK_THROWS_AS(make_symmetric_chain(rowless), input_error);
}

TEST_CASE("powers by repeated squaring match direct multiplication") {
  const ReversibleChain c = generate_chain("path_holding", 4, 0);
  Eigen::MatrixXd direct = Eigen::MatrixXd::Identity(4, 4);
  for (int s = 0; s < 5; ++s) direct = direct * c.A;
  CHECK(max_abs_diff(chain_power(c, 5), direct) <= 1e-12);
  CHECK(max_abs_diff(chain_power(c, 0), Eigen::MatrixXd::Identity(4, 4)) == 0.0);
  CHECK(max_abs_diff(chain_power(c, 1), c.A) <= 1e-15);
}

TEST_CASE("cesaro averages: closed cases and spectral agreement") {
  const ReversibleChain two = generate_chain("cycle", 2, 0);
  // (A + A^2)/2 = (A + I)/2 has every entry 1/2
  CHECK(max_abs_diff(cesaro(two, 2), Eigen::MatrixXd::Constant(2, 2, 0.5)) <=
        1e-14);

  // the complete uniform kernel is idempotent
  const ReversibleChain flat =
      make_symmetric_chain(Eigen::MatrixXd::Constant(4, 4, 0.25));
  for (long long t : {1LL, 3LL, 9LL})
    CHECK(max_abs_diff(cesaro(flat, t), flat.A) <= 1e-13);

  const ReversibleChain c = generate_chain("random_reversible", 5, 9);
  for (long long t : {1LL, 2LL, 7LL, 30LL}) {
    CHECK(max_abs_diff(cesaro(c, t), cesaro_spectral(c, t)) <= 1e-10);
    CHECK(max_abs_diff(cesaro_auto(c, t), cesaro_spectral(c, t)) <= 1e-10);
  }
}

TEST_CASE("cesaro eigenvalue weight") {
  CHECK(cesaro_weight(1.0, 1000) == doctest::Approx(1.0));
  CHECK(cesaro_weight(0.0, 5) == doctest::Approx(0.0));
  CHECK(cesaro_weight(-1.0, 2) == doctest::Approx(0.0));
  const double lam = 0.73;
  double direct = 0;
  for (int s = 1; s <= 7; ++s) direct += std::pow(lam, s) / 7.0;
  CHECK(cesaro_weight(lam, 7) == doctest::Approx(direct).epsilon(1e-12));
  // stability far beyond what direct powering could resolve
  CHECK(cesaro_weight(1.0 - 1e-12, 1LL << 40) > 0.0);
}

TEST_CASE("green pair of the lazy resolvent") {
  const ReversibleChain id =
      make_symmetric_chain(Eigen::MatrixXd::Identity(3, 3));
  const GreenPair g = green(id, 4);
  CHECK(max_abs_diff(g.G, Eigen::MatrixXd::Identity(3, 3)) <= 1e-12);
  CHECK(max_abs_diff(g.B, 0.75 * Eigen::MatrixXd::Identity(3, 3)) <= 1e-12);

  // rows of G are probabilities
  const ReversibleChain c = generate_chain("random_reversible", 4, 5);
  const GreenPair gc = green(c, 6);
  for (int i = 0; i < 4; ++i)
    CHECK(gc.G.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral decomposition reconstructs the symmetrized kernel") {
  const ReversibleChain c = generate_chain("random_reversible", 6, 3);
  const SpectralDecomposition d = decompose(c);
  REQUIRE(static_cast<int>(d.support.size()) == 6);
  CHECK(d.lambda(0) == doctest::Approx(1.0));
  Eigen::MatrixXd S(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      S(i, j) = std::sqrt(c.pi(i)) * c.A(i, j) / std::sqrt(c.pi(j));
  const Eigen::MatrixXd rebuilt =
      d.U * d.lambda.asDiagonal() * d.U.transpose();
  CHECK(max_abs_diff(rebuilt, S) <= 1e-10);
  CHECK(max_abs_diff(d.U * d.U.transpose(), Eigen::MatrixXd::Identity(6, 6)) <=
        1e-10);
}

TEST_CASE("absolute gap on known chains") {
  CHECK(absolute_gap(generate_chain("cycle", 2, 0)) == doctest::Approx(1.0));
  CHECK(absolute_gap(generate_chain("cycle", 4, 0)) == doctest::Approx(1.0));
  const ReversibleChain flat =
      make_symmetric_chain(Eigen::MatrixXd::Constant(5, 5, 0.2));
  CHECK(absolute_gap(flat) == doctest::Approx(0.0));
  const ReversibleChain id =
      make_symmetric_chain(Eigen::MatrixXd::Identity(3, 3));
  CHECK(absolute_gap(id) == doctest::Approx(1.0));
}

TEST_CASE("regular graphs") {
  const ReversibleChain c = generate_chain("regular_graph", 6, 11, {{"d", 3}});
  CHECK(max_abs_diff(c.A, c.A.transpose()) <= 1e-15);
  for (int i = 0; i < 6; ++i) {
    CHECK(c.A.row(i).sum() == doctest::Approx(1.0));
    CHECK(c.A(i, i) == 0.0);
  }
  CHECK_THROWS_AS(generate_chain("regular_graph", 5, 1, {{"d", 3}}),
                  input_error);
  CHECK_THROWS_AS(generate_chain("nope", 4, 1), input_error);
}

TEST_CASE("chain json round trip") {
  const ReversibleChain c = generate_chain("random_reversible", 4, 8);
  const ReversibleChain back = chain_from_json(chain_to_json(c));
  CHECK(max_abs_diff(back.A, c.A) <= 1e-15);
  CHECK((back.pi - c.pi).cwiseAbs().maxCoeff() <= 1e-15);

  const ReversibleChain gen = chain_from_json(
      {{"generate", {{"kind", "cycle"}, {"n", 3}}}}, 0);
  CHECK(gen.size() == 3);
}
