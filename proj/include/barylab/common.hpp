#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace barylab {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Module-wide numeric tolerances. Individual certificates pin their own
// slack; these are the defaults used by validators.
inline constexpr double kTolValidate = 1e-12;  // construction-time invariants
inline constexpr double kTolCheck = 1e-9;      // recomputation / consistency
inline constexpr double kTolCert = 1e-8;       // certified-inequality slack

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad user input (malformed JSON, precondition violations). Maps to exit
// code / status 2.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A certified inequality or internal invariant failed. Maps to exit
// code / status 1.
struct check_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw input_error(msg);
}

inline void ensure(bool ok, const std::string& msg) {
  if (!ok) throw check_error(msg);
}

// d^p with fast paths for the common exponents.
inline double powp(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

// Deterministic RNG: one generator per (seed, stream) pair so independent
// instances can be evaluated in any order (or in parallel) without
// perturbing each other.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : eng_(mix(seed, stream)) {}

  double uniform() { return unit_(eng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian() { return normal_(eng_); }
  // integer in [0, n)
  int index(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(eng_));
  }
  std::uint64_t raw() { return eng_(); }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Run fn(i) for i in [0, count). Work is pulled from an atomic counter and
// results must be written by index, so the outcome does not depend on the
// number of workers.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  const int workers = std::min(jobs, count);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// JSON helpers: extended nonnegative reals serialize +inf as the string
// "inf" (nlohmann would silently emit null).
inline json num_or_inf(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

inline double num_from_json(const json& j, const std::string& field) {
  const json* p = &j;
  if (!field.empty()) {
    if (!j.contains(field)) throw input_error("missing field '" + field + "'");
    p = &j.at(field);
  }
  if (p->is_string()) {
    const std::string s = p->get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw input_error("field '" + field + "': expected number or \"inf\"");
  }
  if (!p->is_number()) throw input_error("field '" + field + "': expected number");
  return p->get<double>();
}

}  // namespace barylab
