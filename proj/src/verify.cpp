#include "barylab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "barylab/barycenter.hpp"
#include "barylab/cotype.hpp"
#include "barylab/extension.hpp"
#include "barylab/kalton.hpp"
#include "barylab/markov.hpp"
#include "barylab/metric.hpp"
#include "barylab/spectral.hpp"
#include "barylab/transport.hpp"

namespace barylab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// reversible chain with a sprinkling of exact zero transitions
ReversibleChain sparse_reversible(int n, Rng& rng) {
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, i) = rng.uniform(0.1, 1.1);
    for (int j = i + 1; j < n; ++j) {
      const double v = rng.uniform() < 0.35 ? 0.0 : rng.uniform(0.1, 1.1);
      w(i, j) = w(j, i) = v;
    }
  }
  const Eigen::VectorXd s = w.rowwise().sum();
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) A.row(i) = w.row(i) / s(i);
  return make_chain(A, s / s.sum());
}

ReversibleChain random_chain(int which, int n, Rng& rng) {
  switch (which % 3) {
    case 0:
      return generate_chain("random_reversible", n, rng.raw());
    case 1:
      return generate_chain("random_symmetric", n, rng.raw());
    default:
      return sparse_reversible(n, rng);
  }
}

std::vector<Point> sample_points(const MetricSpace& s, int n, Rng& rng) {
  std::vector<Point> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = s.sample(rng);
  return pts;
}

Eigen::VectorXd random_vec(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.uniform(-1, 1);
  return v;
}

CheckResult cotype_bound(std::uint64_t seed) {
  CheckResult r{1, "cotype_certificate_bound", false, "", 0};
  Rng rng(seed, 11);
  double worst = 0;
  int count = 0;
  for (int k = 0; k < 210; ++k) {
    const int n = 2 + static_cast<int>(rng.index(9));
    const int d = 1 + static_cast<int>(rng.index(5));
    const long long t = 1 + static_cast<long long>(rng.index(10));
    const ReversibleChain c = random_chain(k, n, rng);
    const MetricSpace s = MetricSpace::euclidean(d);
    const CotypeCertificate cert =
        cotype_construct(make_map(s), c, sample_points(s, n, rng), 2.0, t);
    worst = std::max(worst, cert.ratio);
    ++count;
  }
  r.pass = worst <= 17 + 1e-8;
  r.detail = "instances=" + std::to_string(count) + " worst_ratio=" +
             fmt(worst) + " bound=17";
  return r;
}

CheckResult gamma_oracle(std::uint64_t seed) {
  CheckResult r{2, "euclidean_gamma_oracle", false, "", 0};
  Rng rng(seed, 12);
  const MetricSpace s = MetricSpace::euclidean(1);
  double worst_low = 1, worst_high = 0;
  bool ok = true;
  for (int n = 2; n <= 8; ++n) {
    const ReversibleChain c = random_chain(n, n, rng);
    const double exact = gamma_plus_analytic(c);
    if (!std::isfinite(exact)) continue;
    const GammaSearch gs = gamma_plus_search(s, c, 2.0, 200, rng.raw());
    const double frac = gs.gamma / exact;
    worst_low = std::min(worst_low, frac);
    worst_high = std::max(worst_high, gs.gamma - exact);
    if (frac < 0.95 || gs.gamma > exact + 1e-6) ok = false;
  }
  r.pass = ok;
  r.detail = "min_search/analytic=" + fmt(worst_low) +
             " max_overshoot=" + fmt(worst_high);
  return r;
}

CheckResult cesaro_envelope(std::uint64_t seed) {
  CheckResult r{3, "cesaro_gamma_envelope", false, "", 0};
  Rng rng(seed, 13);
  double worst = 0;  // gamma_ces / envelope
  bool ok = true;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + static_cast<int>(rng.index(9));
    const ReversibleChain c = generate_chain("random_symmetric", n, rng.raw());
    const double g = gamma_plus_analytic(c);
    for (const long long t : {1LL, 2LL, 4LL, 8LL}) {
      const double env =
          std::isfinite(g) ? 20 * std::max(1.0, g / static_cast<double>(t))
                           : kInf;
      const double gt =
          gamma_plus_analytic(make_chain(cesaro_auto(c, t), c.pi));
      if (!std::isfinite(env)) continue;
      if (!std::isfinite(gt) || gt > env * (1 + 1e-12) + 1e-9) ok = false;
      if (std::isfinite(gt)) worst = std::max(worst, gt / env);
    }
  }
  r.pass = ok;
  r.detail = "worst gamma_ces/envelope=" + fmt(worst);
  return r;
}

CheckResult pisier_residuals(std::uint64_t seed) {
  CheckResult r{4, "pisier_martingale_residual", false, "", 0};
  Rng rng(seed, 14);
  double worst = -kInf;
  int mutations = 0, detected = 0;
  bool ok = true;

  struct Setup {
    MetricSpace s;
    std::string kind;
    int n;
    int t;
  };
  const std::vector<Setup> setups = {
      {MetricSpace::euclidean(2), "path_holding", 3, 3},
      {MetricSpace::euclidean(3), "random_reversible", 4, 3},
      {MetricSpace::hyperbolic_disk(), "path_holding", 3, 3},
      {MetricSpace::hyperbolic_disk(), "random_reversible", 3, 3},
  };
  for (const auto& su : setups) {
    const BarycentricMap map = make_map(su.s);
    const ReversibleChain c = generate_chain(su.kind, su.n, rng.raw());
    const std::vector<Point> x = sample_points(su.s, su.n, rng);
    const MartingaleInstance m = dp_martingale(map, c, x, su.t);
    validate_martingale(map, m);
    for (int probe = 0; probe < 4; ++probe) {
      const Point z = probe == 0 ? x[0] : su.s.sample(rng);
      worst = std::max(worst, pisier_residual(map, m, z, 1.0, 2.0));
    }
    for (int mu = 0; mu < 5; ++mu) {
      MartingaleInstance bad = m;
      const int l = static_cast<int>(rng.index(bad.levels()));
      const int w = static_cast<int>(rng.index(bad.omega_size()));
      Point& pt = bad.Z[l][w];
      if (su.s.kind == SpaceKind::HyperbolicDisk) {
        double nrm = 0;
        for (double v : pt.x) nrm += v * v;
        if (std::sqrt(nrm) < 1e-6)
          pt = Point::vec({0.3, 0.0});
        else
          for (double& v : pt.x) v *= 0.5;
      } else {
        pt.x[0] += 0.25;
      }
      ++mutations;
      try {
        validate_martingale(map, bad);
      } catch (const check_error&) {
        ++detected;
      }
    }
  }
  if (worst > 1e-8) ok = false;
  if (detected != mutations) ok = false;
  r.pass = ok;
  r.detail = "worst_residual=" + fmt(worst) + " mutations_detected=" +
             std::to_string(detected) + "/" + std::to_string(mutations);
  return r;
}

CheckResult cn_rounding(std::uint64_t seed) {
  CheckResult r{5, "net_rounding_3p_bound", false, "", 0};
  Rng rng(seed, 15);
  const MetricSpace s = MetricSpace::euclidean(3);
  const double ps[3] = {1, 2, 4};
  double worst = 0;  // max lhs / bound
  for (int k = 0; k < 500; ++k) {
    const double p = ps[k % 3];
    const int n = 1 + static_cast<int>(rng.index(6));
    const int m = 1 + static_cast<int>(rng.index(6));
    const std::vector<Point> z = sample_points(s, m, rng);
    Eigen::MatrixXd B(n, m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j)
        B(i, j) = rng.uniform() < 0.25 && m > 1 ? 0.0 : rng.uniform() + 0.01;
      if (B.row(i).sum() <= 1e-9) B(i, static_cast<int>(rng.index(m))) = 1.0;
      B.row(i) /= B.row(i).sum();
    }
    const ReversibleChain c = sparse_reversible(n, rng);
    const RoundReport rep = round_to_net(s, z, B, c.A, c.pi, p);
    if (rep.bound > 0)
      worst = std::max(worst, std::max(rep.lhs_b, rep.lhs_c) / rep.bound);
  }
  r.pass = true;  // round_to_net hard-asserts the bound; reaching here is green
  r.detail = "instances=500 worst_lhs/bound=" + fmt(worst);
  return r;
}

CheckResult cesaro_domination(std::uint64_t seed) {
  CheckResult r{6, "cesaro_power_domination", false, "", 0};
  Rng rng(seed, 16);
  const MetricSpace s = MetricSpace::euclidean(2);
  double worst = 0;
  int count = 0;
  for (const char* kind : {"path_holding", "cycle", "sparse"}) {
    for (int n = 2; n <= 10; ++n) {
      const ReversibleChain c = std::string(kind) == "sparse"
                                    ? sparse_reversible(n, rng)
                                    : generate_chain(kind, n, rng.raw());
      const std::vector<Point> x = sample_points(s, n, rng);
      for (long long t = 1; t <= 10; ++t)
        for (const double p : {1.0, 2.0, 3.0}) {
          const DominationReport rep = domination_report(s, c, x, p, t);
          if (rep.e_ces > 0)
            worst = std::max(worst, rep.pow_ratio / powp(2.0, p));
          ++count;
        }
    }
  }
  r.pass = true;  // domination_report hard-asserts the 2^p bound
  r.detail = "reports=" + std::to_string(count) +
             " worst_pow/(2^p ces)=" + fmt(worst);
  return r;
}

CheckResult pipeline_h(std::uint64_t seed) {
  CheckResult r{7, "weighted_extension_pipeline", false, "", 0};
  Rng rng(seed, 17);
  const MetricSpace sX = MetricSpace::euclidean(2);
  bool ok = true;
  double worst = 0;  // goal_lhs / goal_rhs
  for (int k = 0; k < 100; ++k) {
    std::vector<Point> S = sample_points(sX, 8, rng);
    std::vector<Eigen::VectorXd> f;
    for (int i = 0; i < 4; ++i) f.push_back(random_vec(rng, 2));
    const ExtensionInstance inst =
        make_instance(sX, std::move(S), {0, 1, 2, 3},
                      TargetSpace::euclidean(2), std::move(f));
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(8, 8);
    if (k % 25 != 0) {  // keep a few all-zero weight matrices in the mix
      for (int i = 0; i < 8; ++i)
        for (int j = i; j < 8; ++j) {
          const double v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
          H(i, j) = H(j, i) = v;
        }
    }
    const HCertificate h =
        build_h_certificate(inst, H, 2.0, 1.0, std::sqrt(17.0), 0, 0);
    if (!h.pass) ok = false;
    if (h.goal_rhs > 0) worst = std::max(worst, h.goal_lhs / h.goal_rhs);
  }
  r.pass = ok;
  r.detail = "instances=100 worst_goal_lhs/rhs=" + fmt(worst);
  return r;
}

CheckResult contraction_chain(std::uint64_t seed) {
  CheckResult r{8, "barycenter_contraction_bound", false, "", 0};
  Rng rng(seed, 18);
  const MetricSpace s = MetricSpace::euclidean(2);
  const BarycentricMap map = make_map(s);
  bool ok = true;
  double worst = 0;  // measured / bound
  for (int kc = 0; kc < 5; ++kc) {
    const int n = 3 + static_cast<int>(rng.index(6));
    const ReversibleChain c = generate_chain("random_reversible", n, rng.raw());
    const double g = gamma_plus_analytic(c);
    const double bound = lambda_bound_from_gamma(g, 1.0, 2.0);
    for (int k = 0; k < 100; ++k) {
      const std::vector<Point> f = sample_points(s, n, rng);
      const Point b = global_barycenter(map, c.pi, f);
      const std::vector<Point> bb(n, b);
      const double den = lpn_dist(s, c.pi, f, bb, 2.0);
      if (den <= 1e-12) continue;
      const std::vector<Point> tf = apply_markov_operator(map, c.A, f);
      const double measured = lpn_dist(s, c.pi, tf, bb, 2.0) / den;
      if (measured > bound + 1e-6) ok = false;
      if (bound > 0) worst = std::max(worst, measured / bound);
    }
  }
  r.pass = ok;
  r.detail = "worst measured/bound=" + fmt(worst);
  return r;
}

CheckResult path_growth(std::uint64_t) {
  CheckResult r{9, "path_counterexample_growth", false, "", 0};
  std::string vals;
  double prev = -kInf;
  bool ok = true;
  for (const int n : {8, 16, 32, 64}) {
    const PathCotypeResult pr = path_cotype_experiment(n, 1.0);
    if (!(pr.ratio > prev)) ok = false;
    prev = pr.ratio;
    vals += (vals.empty() ? "" : ",") + fmt(pr.ratio);
  }
  r.pass = ok;
  r.detail = "ratios(n=8,16,32,64)=" + vals;
  return r;
}

CheckResult kalton_instances(std::uint64_t seed) {
  CheckResult r{10, "kalton_instance_invariants", false, "", 0};
  std::string detail;
  bool ok = true;
  for (const int n : {2, 3}) {
    const KaltonInstance inst = build_instance(n, 1.0, seed + n);
    validate_instance(inst);
    const HolderReport hr = holder_check(inst, 1.0);
    if (hr.max_ratio > hr.bound + 1e-9) ok = false;
    detail += (detail.empty() ? "" : " ") + std::string("n=") +
              std::to_string(n) + ":net=" + std::to_string(inst.net_size()) +
              ",sphere=" + std::to_string(inst.a_size()) +
              ",holder=" + fmt(hr.max_ratio);
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

CheckResult extension_oracle(std::uint64_t seed) {
  CheckResult r{11, "extension_mcshane_agreement", false, "", 0};
  Rng rng(seed, 19);
  const MetricSpace s = MetricSpace::euclidean(2);
  bool ok = true;
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const int total = 3 + static_cast<int>(rng.index(6));
    const int m = 1 + rng.index(std::min(total, 4));
    std::vector<int> anchors(m);
    for (int i = 0; i < m; ++i) anchors[i] = i;
    std::vector<Eigen::VectorXd> f;
    for (int i = 0; i < m; ++i) f.push_back(random_vec(rng, 1));
    const ExtensionInstance inst =
        make_instance(s, sample_points(s, total, rng), std::move(anchors),
                      TargetSpace::euclidean(1), std::move(f));
    const ExtensionResult res = min_lipschitz_extension(inst, 3e-5);
    const double err =
        std::abs(res.L - inst.lip) / std::max(1.0, inst.lip);
    worst = std::max(worst, err);
    if (err > 1e-4) ok = false;
  }
  r.pass = ok;
  r.detail = "instances=50 worst |L-lip|/max(1,lip)=" + fmt(worst);
  return r;
}

CheckResult metric_axioms(std::uint64_t seed) {
  CheckResult r{101, "metric_triangle_sampling", false, "", 0};
  const std::vector<TreeEdge> edges = {{0, 1, 1.0}, {1, 2, 0.5}, {1, 3, 2.0}};
  const std::vector<MetricSpace> spaces = {
      MetricSpace::euclidean(3), MetricSpace::lp(3, 1.5),
      MetricSpace::tree(edges), MetricSpace::hyperbolic_disk(),
      snowflake(MetricSpace::euclidean(2), 0.5)};
  int violations = 0;
  for (const auto& s : spaces)
    violations += validate_metric(s, 300, seed).violations;
  r.pass = violations == 0;
  r.detail = "violations=" + std::to_string(violations);
  return r;
}

CheckResult transport_certificates(std::uint64_t seed) {
  CheckResult r{102, "transport_simplex_certificates", false, "", 0};
  Rng rng(seed, 20);
  const MetricSpace s = MetricSpace::euclidean(2);
  double worst_dual = 0;
  bool ok = true;
  for (int k = 0; k < 40; ++k) {
    const int a = 1 + static_cast<int>(rng.index(5));
    const int b = 1 + static_cast<int>(rng.index(5));
    std::vector<double> wa(a), wb(b);
    double ta = 0, tb = 0;
    for (double& v : wa) ta += (v = rng.uniform(0.1, 1));
    for (double& v : wb) tb += (v = rng.uniform(0.1, 1));
    for (double& v : wa) v /= ta;
    for (double& v : wb) v /= tb;
    const DiscreteMeasure mu = make_measure(s, sample_points(s, a, rng), wa);
    const DiscreteMeasure nu = make_measure(s, sample_points(s, b, rng), wb);
    const double p = k % 2 ? 1.0 : 2.0;
    const WassersteinResult w = wasserstein(s, mu, nu, p);
    worst_dual = std::max(worst_dual, w.dual_violation);
    if (w.dual_violation > 1e-9) ok = false;
    // metric sanity: W_p(mu, mu) = 0
    const WassersteinResult self = wasserstein(s, mu, mu, p);
    if (self.value > 1e-9) ok = false;
  }
  r.pass = ok;
  r.detail = "worst_dual_violation=" + fmt(worst_dual);
  return r;
}

CheckResult barycenter_laws(std::uint64_t seed) {
  CheckResult r{103, "barycentric_map_laws", false, "", 0};
  const std::vector<TreeEdge> edges = {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 0.5}};
  const std::vector<MetricSpace> spaces = {MetricSpace::euclidean(3),
                                           MetricSpace::tree(edges),
                                           MetricSpace::hyperbolic_disk()};
  bool ok = true;
  double worst = -kInf;
  for (const auto& s : spaces) {
    const BarycentricCheck chk = check_barycentric(make_map(s), 60, seed);
    worst = std::max(worst, chk.worst_p_residual);
    if (chk.worst_p_residual > 1e-8) ok = false;
    if (chk.worst_delta_residual > 1e-9) ok = false;
  }
  r.pass = ok;
  r.detail = "worst_K_residual=" + fmt(worst);
  return r;
}

CheckResult snowflake_type(std::uint64_t seed) {
  CheckResult r{104, "snowflake_markov_type", false, "", 0};
  Rng rng(seed, 21);
  const MetricSpace half = snowflake(MetricSpace::euclidean(2), 0.5);
  double worst = -kInf;
  bool ok = true;
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + static_cast<int>(rng.index(7));
    const long long t = 1 + static_cast<long long>(rng.index(8));
    const ReversibleChain c = random_chain(k, n, rng);
    const MarkovTypeCheck chk =
        markov_type_check(half, c, sample_points(half, n, rng), 2.0, t, 1.0);
    worst = std::max(worst, chk.residual / std::max(1.0, chk.rhs));
    if (chk.residual > 1e-9 * std::max(1.0, chk.rhs)) ok = false;
  }
  r.pass = ok;
  r.detail = "worst scaled residual=" + fmt(worst);
  return r;
}

template <typename F>
CheckResult timed(F&& fn, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = fn(seed);
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return r;
}

}  // namespace

std::vector<CheckResult> acceptance_criteria(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(timed(cotype_bound, seed));
  out.push_back(timed(gamma_oracle, seed));
  out.push_back(timed(cesaro_envelope, seed));
  out.push_back(timed(pisier_residuals, seed));
  out.push_back(timed(cn_rounding, seed));
  out.push_back(timed(cesaro_domination, seed));
  out.push_back(timed(pipeline_h, seed));
  out.push_back(timed(contraction_chain, seed));
  out.push_back(timed(path_growth, seed));
  out.push_back(timed(kalton_instances, seed));
  out.push_back(timed(extension_oracle, seed));
  return out;
}

std::vector<CheckResult> module_invariants(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(timed(metric_axioms, seed));
  out.push_back(timed(transport_certificates, seed));
  out.push_back(timed(barycenter_laws, seed));
  out.push_back(timed(snowflake_type, seed));
  return out;
}

std::vector<CheckResult> run_verify(std::uint64_t seed) {
  std::vector<CheckResult> out = module_invariants(seed);
  std::vector<CheckResult> acc = acceptance_criteria(seed);
  out.insert(out.end(), acc.begin(), acc.end());
  return out;
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back(json{{"id", c.id},
                       {"name", c.name},
                       {"pass", c.pass},
                       {"detail", c.detail}});
  return arr;
}

}  // namespace barylab
