#include "barylab/runner.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "barylab/barycenter.hpp"
#include "barylab/cotype.hpp"
#include "barylab/extension.hpp"
#include "barylab/kalton.hpp"
#include "barylab/markov.hpp"
#include "barylab/metric.hpp"
#include "barylab/spectral.hpp"
#include "barylab/verify.hpp"

namespace barylab {

namespace {

std::uint64_t seed_of(const json& req) {
  return req.value("seed", static_cast<std::uint64_t>(0));
}

double tol_of(const json& req, double dflt) { return req.value("tol", dflt); }

MetricSpace space_of(const json& req) {
  if (req.contains("space")) return MetricSpace::from_json(req.at("space"));
  return MetricSpace::euclidean(1);
}

std::vector<Point> points_of(const json& req, const MetricSpace& s, int n,
                             std::uint64_t seed) {
  std::vector<Point> x;
  if (req.contains("x")) {
    for (const auto& pj : req.at("x")) x.push_back(s.point_from_json(pj));
    require(static_cast<int>(x.size()) == n,
            "x must list one point per chain state");
    return x;
  }
  Rng rng(seed, 31);
  for (int i = 0; i < n; ++i) x.push_back(s.sample(rng));
  return x;
}

json points_to_json(const MetricSpace& s, const std::vector<Point>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(s.point_to_json(p));
  return arr;
}

json run_gamma(const json& req) {
  const std::uint64_t seed = seed_of(req);
  const ReversibleChain c = chain_from_json(req.at("chain"), seed);
  const MetricSpace s = space_of(req);
  const double p = req.value("p", 2.0);
  const std::string mode = req.value("mode", "both");
  require(mode == "both" || mode == "analytic" || mode == "search",
          "mode must be analytic, search, or both");
  json out;
  if (mode != "search") {
    require(p == 2.0, "the analytic value applies to p = 2 only");
    out["analytic"] = num_or_inf(gamma_plus_analytic(c));
  }
  if (mode != "analytic") {
    const int restarts = req.value("restarts", 60);
    const GammaSearch gs = gamma_plus_search(s, c, p, restarts, seed);
    out["search"] = json{{"gamma", num_or_inf(gs.gamma)},
                         {"restarts", gs.restarts},
                         {"x", points_to_json(s, gs.x)},
                         {"y", points_to_json(s, gs.y)}};
  }
  if (req.contains("fixed")) {
    std::vector<Point> x, y;
    for (const auto& pj : req.at("fixed").at("x"))
      x.push_back(s.point_from_json(pj));
    for (const auto& pj : req.at("fixed").at("y"))
      y.push_back(s.point_from_json(pj));
    out["fixed"] = num_or_inf(gamma_plus_fixed(s, c, x, y, p));
  }
  return out;
}

json run_calculus(const json& req) {
  const std::uint64_t seed = seed_of(req);
  const ReversibleChain c = chain_from_json(req.at("chain"), seed);
  const MetricSpace s = space_of(req);
  const CalculusReport rep = calculus_report(
      s, c, req.value("p", 2.0), req.value("t", static_cast<long long>(1)),
      req.value("Gamma", 1.0), req.value("K", 1.0), req.value("budget", 60),
      seed);
  return calculus_to_json(rep);
}

json run_cotype(const json& req) {
  const std::uint64_t seed = seed_of(req);
  const ReversibleChain c = chain_from_json(req.at("chain"), seed);
  const MetricSpace s = space_of(req);
  json mapreq{{"space", s.to_json()}};
  if (req.contains("K")) mapreq["K"] = req.at("K");
  if (req.contains("p")) mapreq["p"] = req.at("p");
  const BarycentricMap map = map_from_json(mapreq);
  const double p = req.value("p", map.p);
  const long long t = req.value("t", static_cast<long long>(1));
  const std::vector<Point> x = points_of(req, s, c.size(), seed);
  const CotypeCertificate cert = cotype_construct(map, c, x, p, t);
  const double bound = powp(4.0 * map.Gamma * map.K, p) + 1;
  json out{{"n", cert.n},
           {"p", cert.p},
           {"t", cert.t},
           {"epsilon", cert.epsilon},
           {"fast_path", cert.fast_path},
           {"lhs", cert.lhs},
           {"rhs_base", cert.rhs_base},
           {"ratio", num_or_inf(cert.ratio)},
           {"bound", bound},
           {"pass", cert.ratio <= bound + tol_of(req, kTolCert)},
           {"x", points_to_json(s, cert.x)},
           {"y", points_to_json(s, cert.y)}};
  if (req.value("ball", false)) {
    const BallCotypeResult ball =
        ball_cotype_certificate(s, c, cert.x, cert.y, p, std::max<long long>(t, 1));
    out["ball"] = json{{"lhs", ball.lhs},
                       {"rhs", ball.rhs},
                       {"ratio", num_or_inf(ball.ratio)}};
  }
  return out;
}

json run_pisier(const json& req) {
  const std::uint64_t seed = seed_of(req);
  const ReversibleChain c = chain_from_json(req.at("chain"), seed);
  const MetricSpace s = space_of(req);
  json mapreq{{"space", s.to_json()}};
  if (req.contains("K")) mapreq["K"] = req.at("K");
  if (req.contains("p")) mapreq["p"] = req.at("p");
  const BarycentricMap map = map_from_json(mapreq);
  const double p = req.value("p", map.p);
  const double K = req.value("K", map.K);
  const int t = req.value("t", 3);
  const std::vector<Point> x = points_of(req, s, c.size(), seed);
  const MartingaleInstance m = dp_martingale(map, c, x, t);
  validate_martingale(map, m);
  const int probes = req.value("probes", 4);
  Rng rng(seed, 32);
  json res = json::array();
  double worst = -kInf;
  for (int k = 0; k < probes; ++k) {
    const Point z = k == 0 ? x[0] : s.sample(rng);
    const double v = pisier_residual(map, m, z, K, p);
    worst = std::max(worst, v);
    res.push_back(json{{"z", s.point_to_json(z)}, {"residual", v}});
  }
  return json{{"levels", m.levels()},
              {"omega", m.omega_size()},
              {"probes", res},
              {"max_residual", worst},
              {"pass", worst <= tol_of(req, 1e-8)}};
}

json run_counterexample(const json& req) {
  const PathCotypeResult r =
      path_cotype_experiment(req.at("n").get<int>(), req.value("p", 1.0),
                             req.value("c", 1.0), req.value("e", -1.0));
  return json{{"n", r.n},       {"p", r.p},
              {"t", r.t},       {"lhs_min", r.lhs_min},
              {"rhs", r.rhs},   {"ratio", num_or_inf(r.ratio)},
              {"method", r.method}, {"y", r.y}};
}

json run_extend(const json& req) {
  const ExtensionInstance inst = instance_from_json(req.at("instance"));
  const double tol = tol_of(req, 1e-6);
  const ExtensionResult res = min_lipschitz_extension(inst, tol);
  json fv = json::array();
  for (const auto& v : res.F)
    fv.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  json out{{"lip", num_or_inf(inst.lip)},
           {"L", res.L},
           {"F", fv},
           {"worst_violation", res.worst_violation},
           {"bisection_steps", res.bisection_steps},
           {"sweeps", res.sweeps}};
  if (inst.Y.kind == TargetSpace::Kind::Euclidean && inst.Y.dim == 1) {
    const std::vector<Eigen::VectorXd> F = mcshane_extend(inst);
    json mf = json::array();
    for (const auto& v : F) mf.push_back(v(0));
    out["mcshane"] = json{{"F", mf}, {"L", num_or_inf(inst.lip)}};
  }
  return out;
}

json run_hcert(const json& req) {
  const ExtensionInstance inst = instance_from_json(req.at("instance"));
  const json& hj = req.at("H");
  require(hj.is_array(), "H must be a matrix (array of rows)");
  const int k = static_cast<int>(hj.size());
  Eigen::MatrixXd H(k, k);
  for (int i = 0; i < k; ++i) {
    require(static_cast<int>(hj.at(i).size()) == k, "H must be square");
    for (int j = 0; j < k; ++j) H(i, j) = hj.at(i).at(j).get<double>();
  }
  const double p = req.value("p", 2.0);
  const double M = req.value("M", 1.0);
  const double N =
      req.value("N", std::pow(powp(4.0, p) + 1.0, 1.0 / p));
  const HCertificate h = build_h_certificate(
      inst, H, p, M, N, req.value("t", static_cast<long long>(0)),
      req.value("delta", 0.0));
  return hcert_to_json(h);
}

json run_kalton(const json& req) {
  const std::uint64_t seed = seed_of(req);
  const int n = req.at("n").get<int>();
  const double theta = req.value("theta", 1.0);
  const KaltonInstance inst = build_instance(n, theta, seed);
  const double tau = req.value("tau", 1.0);
  const HolderReport hr = holder_check(inst, tau);
  json out{{"instance", kalton_to_json(inst)},
           {"holder", json{{"tau", hr.tau},
                           {"max_ratio", hr.max_ratio},
                           {"bound", hr.bound}}}};
  if (req.value("extension", false)) {
    const LowerReport lr = extension_lower_experiment(
        inst, req.value("extra", 10), tol_of(req, 1e-3), seed);
    out["extension"] = json{{"lip_f", lr.lip_f},
                            {"L", lr.L},
                            {"ratio", lr.ratio},
                            {"extra", lr.extra}};
  }
  return out;
}

json run_genchain(const json& req) {
  const ReversibleChain c = chain_from_json(
      req.contains("generate") ? req : json{{"generate", req}}, seed_of(req));
  return chain_to_json(c);
}

json run_verify_cmd(const json& req) {
  const std::vector<CheckResult> checks = run_verify(seed_of(req));
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  return json{{"checks", checks_to_json(checks)}, {"pass", pass}};
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j)
      flatten(v, prefix + "[" + std::to_string(i++) + "]", os);
  } else {
    os << prefix << ",";
    if (j.is_string()) {
      os << j.get<std::string>();
    } else if (j.is_boolean()) {
      os << (j.get<bool>() ? "true" : "false");
    } else if (j.is_number_integer()) {
      os << j.dump();
    } else if (j.is_number()) {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << j.get<double>();
      os << tmp.str();
    } else {
      os << j.dump();
    }
    os << "\n";
  }
}

}  // namespace

json run_request(const std::string& subcommand, const json& request) {
  require(request.is_object(), "request must be a JSON object");
  json report;
  if (subcommand == "gamma") {
    report = run_gamma(request);
  } else if (subcommand == "calculus") {
    report = run_calculus(request);
  } else if (subcommand == "cotype") {
    report = run_cotype(request);
  } else if (subcommand == "pisier") {
    report = run_pisier(request);
  } else if (subcommand == "counterexample") {
    report = run_counterexample(request);
  } else if (subcommand == "extend") {
    report = run_extend(request);
  } else if (subcommand == "hcert") {
    report = run_hcert(request);
  } else if (subcommand == "kalton") {
    report = run_kalton(request);
  } else if (subcommand == "genchain") {
    report = run_genchain(request);
  } else if (subcommand == "verify") {
    report = run_verify_cmd(request);
  } else {
    throw input_error("unknown subcommand: " + subcommand);
  }
  return json{{"version", kVersion},
              {"subcommand", subcommand},
              {"seed", seed_of(request)},
              {"tol", request.contains("tol") ? request.at("tol") : json()},
              {"input", request},
              {"report", report}};
}

std::string report_to_csv(const json& report) {
  std::ostringstream os;
  os << "key,value\n";
  flatten(report, "", os);
  return os.str();
}

}  // namespace barylab
