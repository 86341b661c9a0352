// Command-line front end. Talks to the core exclusively through the shared
// library's C interface; json/CLI11 here are only request plumbing.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <deque>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "barylab/barylab_c.h"

using nlohmann::json;

namespace {

struct SubState {
  std::string in_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> jobs;
  std::string chain_file;
  std::string instance_file;
  std::string h_file;
  std::string gen_kind;
  int gen_n = 0;
  json flags = json::object();  // convenience flags, merged over --in
};

void add_common(CLI::App* sub, SubState& st) {
  sub->add_option("--in", st.in_path, "JSON request file; flags override its fields");
  sub->add_option("--out", st.out_path, "write the report here as JSON plus a .csv sibling");
  sub->add_option("--seed", st.seed, "random seed");
  sub->add_option("--tol", st.tol, "tolerance override");
  sub->add_option("--jobs", st.jobs, "worker threads, 0 = all cores");
}

void opt_num(CLI::App* sub, SubState& st, const std::string& flag,
             const std::string& key, const std::string& help) {
  sub->add_option_function<double>(
      flag, [&st, key](double v) { st.flags[key] = v; }, help);
}

void opt_int(CLI::App* sub, SubState& st, const std::string& flag,
             const std::string& key, const std::string& help) {
  sub->add_option_function<long long>(
      flag, [&st, key](long long v) { st.flags[key] = v; }, help);
}

void opt_str(CLI::App* sub, SubState& st, const std::string& flag,
             const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(
      flag, [&st, key](const std::string& v) { st.flags[key] = v; }, help);
}

void opt_switch(CLI::App* sub, SubState& st, const std::string& flag,
                const std::string& key, const std::string& help) {
  sub->add_flag_callback(flag, [&st, key] { st.flags[key] = true; }, help);
}

json load_json_file(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open ") + what + " file: " + path);
  json j;
  in >> j;
  return j;
}

json build_request(const SubState& st) {
  json req = json::object();
  if (!st.in_path.empty()) {
    req = load_json_file(st.in_path, "request");
    if (!req.is_object()) throw std::runtime_error("request file must hold a JSON object");
  }
  for (const auto& [k, v] : st.flags.items()) req[k] = v;
  if (st.seed) req["seed"] = *st.seed;
  if (st.tol) req["tol"] = *st.tol;
  if (st.jobs) req["jobs"] = *st.jobs;
  if (!st.chain_file.empty()) {
    req["chain"] = load_json_file(st.chain_file, "chain");
  } else if (!st.gen_kind.empty() && st.gen_n > 0) {
    req["chain"] = json{{"generate", {{"kind", st.gen_kind}, {"n", st.gen_n}}}};
  }
  if (!st.instance_file.empty()) req["instance"] = load_json_file(st.instance_file, "instance");
  if (!st.h_file.empty()) req["H"] = load_json_file(st.h_file, "H");
  return req;
}

std::string csv_sibling(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".csv";
  return out + ".csv";
}

int emit(const std::string& name, const SubState& st) {
  const json req = build_request(st);
  char* out = nullptr;
  const barylab_status rc = barylab_run(name.c_str(), req.dump().c_str(), &out);
  if (rc != BARYLAB_OK) {
    std::cerr << "error: " << barylab_last_error() << "\n";
    return rc == BARYLAB_EINPUT ? 2 : 1;
  }
  const std::string report(out);
  barylab_string_free(out);

  if (!st.out_path.empty()) {
    std::ofstream f(st.out_path);
    if (!f) {
      std::cerr << "error: cannot write " << st.out_path << "\n";
      return 2;
    }
    f << report;
    char* csv = nullptr;
    if (barylab_report_csv(report.c_str(), &csv) != BARYLAB_OK) {
      std::cerr << "error: " << barylab_last_error() << "\n";
      return 1;
    }
    std::ofstream g(csv_sibling(st.out_path));
    if (!g) {
      std::cerr << "error: cannot write " << csv_sibling(st.out_path) << "\n";
      barylab_string_free(csv);
      return 2;
    }
    g << csv;
    barylab_string_free(csv);
  }

  const json parsed = json::parse(report);
  const json& body = parsed.at("report");
  if (name == "verify") {
    int ok = 0, total = 0;
    for (const auto& chk : body.at("checks")) {
      const bool pass = chk.at("pass").get<bool>();
      ++total;
      ok += pass ? 1 : 0;
      std::cout << (pass ? "[PASS] " : "[FAIL] ") << chk.at("name").get<std::string>()
                << " -- " << chk.at("detail").get<std::string>() << "\n";
    }
    std::cout << ok << "/" << total << " checks passed\n";
  } else {
    std::cout << report;
  }
  if (body.is_object() && body.contains("pass") && body.at("pass").is_boolean() &&
      !body.at("pass").get<bool>())
    return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for nonlinear spectral gaps, barycentric rounding and Lipschitz extension"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(barylab_version()));
  std::deque<SubState> states;
  int exit_code = 0;

  auto chain_flags = [&](CLI::App* sub, SubState& st) {
    sub->add_option("--chain", st.chain_file, "chain JSON file (matrix or generate spec)");
    sub->add_option("--kind", st.gen_kind, "generate a chain of this kind instead");
    sub->add_option("--n", st.gen_n, "size for --kind");
  };
  auto wire = [&](CLI::App* sub, const std::string& name, SubState& st) {
    sub->callback([&, name] { exit_code = emit(name, st); });
  };

  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("gamma", "Poincare ratio of a reversible chain");
    add_common(sub, st);
    chain_flags(sub, st);
    opt_num(sub, st, "--p", "p", "metric exponent (analytic mode needs p = 2)");
    opt_str(sub, st, "--mode", "mode", "analytic | search | both");
    opt_int(sub, st, "--restarts", "restarts", "search restarts");
    wire(sub, "gamma", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("calculus", "contraction bound for the chain calculus");
    add_common(sub, st);
    chain_flags(sub, st);
    opt_num(sub, st, "--p", "p", "metric exponent");
    opt_int(sub, st, "--t", "t", "Cesaro horizon");
    opt_num(sub, st, "--Gamma", "Gamma", "barycentric Gamma constant");
    opt_num(sub, st, "--K", "K", "barycentric K constant");
    opt_int(sub, st, "--budget", "budget", "search budget");
    wire(sub, "calculus", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("cotype", "Markov cotype certificate for one configuration");
    add_common(sub, st);
    chain_flags(sub, st);
    opt_num(sub, st, "--p", "p", "metric exponent");
    opt_int(sub, st, "--t", "t", "Cesaro horizon");
    opt_num(sub, st, "--K", "K", "barycentric K constant");
    opt_switch(sub, st, "--ball", "ball", "also run the two-point inequality route");
    wire(sub, "cotype", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("pisier", "martingale decomposition and its residuals");
    add_common(sub, st);
    chain_flags(sub, st);
    opt_num(sub, st, "--p", "p", "metric exponent");
    opt_int(sub, st, "--t", "t", "decomposition depth");
    opt_num(sub, st, "--K", "K", "barycentric K constant");
    opt_int(sub, st, "--probes", "probes", "random probe points");
    wire(sub, "pisier", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("counterexample", "path chains where the plain cotype ratio grows");
    add_common(sub, st);
    opt_int(sub, st, "--n", "n", "path length");
    opt_num(sub, st, "--p", "p", "metric exponent in [1, 2]");
    opt_num(sub, st, "--c", "c", "time scale multiplier");
    opt_num(sub, st, "--e", "e", "time scale exponent (default p)");
    wire(sub, "counterexample", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("extend", "smallest Lipschitz constant of an extension");
    add_common(sub, st);
    sub->add_option("--instance", st.instance_file, "extension instance JSON file");
    wire(sub, "extend", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("hcert", "quadratic-form certificate for one extension instance");
    add_common(sub, st);
    sub->add_option("--instance", st.instance_file, "extension instance JSON file");
    sub->add_option("--H", st.h_file, "symmetric weight matrix JSON file");
    opt_num(sub, st, "--p", "p", "metric exponent");
    opt_num(sub, st, "--M", "M", "snowflake modulus");
    opt_num(sub, st, "--N", "N", "cotype constant");
    opt_int(sub, st, "--t", "t", "initial time scale (0 = auto)");
    opt_num(sub, st, "--delta", "delta", "slack (0 = auto)");
    wire(sub, "hcert", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("kalton", "l1-net instance with the odd section and Holder checks");
    add_common(sub, st);
    opt_int(sub, st, "--n", "n", "ambient dimension, 2..8");
    opt_num(sub, st, "--theta", "theta", "interpolation parameter in (0, 1]");
    opt_num(sub, st, "--tau", "tau", "Holder exponent to check");
    opt_switch(sub, st, "--extension", "extension", "also run the extension lower-bound experiment");
    opt_int(sub, st, "--extra", "extra", "extra sphere samples for --extension");
    wire(sub, "kalton", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("genchain", "generate a reversible chain and print it");
    add_common(sub, st);
    opt_str(sub, st, "--kind", "kind", "path_holding | cycle | random_symmetric | random_reversible | regular_graph");
    opt_int(sub, st, "--n", "n", "state count");
    opt_int(sub, st, "--d", "d", "degree for regular_graph");
    wire(sub, "genchain", st);
  }
  {
    auto& st = states.emplace_back();
    auto* sub = app.add_subcommand("verify", "run every acceptance criterion and invariant suite");
    add_common(sub, st);
    wire(sub, "verify", st);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
