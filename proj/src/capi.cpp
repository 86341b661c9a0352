#include "barylab/barylab_c.h"

#include <cstring>
#include <exception>
#include <string>

#include "barylab/common.hpp"
#include "barylab/markov.hpp"
#include "barylab/metric.hpp"
#include "barylab/runner.hpp"

struct barylab_space {
  barylab::MetricSpace s;
};
struct barylab_chain {
  barylab::ReversibleChain c;
};

namespace {

thread_local std::string g_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
barylab_status guarded(F&& fn) {
  try {
    fn();
    g_error.clear();
    return BARYLAB_OK;
  } catch (const barylab::input_error& e) {
    g_error = e.what();
    return BARYLAB_EINPUT;
  } catch (const barylab::check_error& e) {
    g_error = e.what();
    return BARYLAB_EASSERT;
  } catch (const barylab::json::exception& e) {
    // parse failures, missing keys, type mismatches: the caller's problem
    g_error = e.what();
    return BARYLAB_EINPUT;
  } catch (const std::exception& e) {
    g_error = e.what();
    return BARYLAB_ERUNTIME;
  } catch (...) {
    g_error = "unknown failure";
    return BARYLAB_ERUNTIME;
  }
}

}  // namespace

extern "C" {

const char* barylab_version(void) { return barylab::kVersion; }

const char* barylab_last_error(void) { return g_error.c_str(); }

void barylab_string_free(char* s) { delete[] s; }

barylab_status barylab_space_from_json(const char* json_text,
                                       barylab_space** out) {
  return guarded([&] {
    barylab::require(json_text != nullptr && out != nullptr,
                     "null argument");
    const barylab::json j = barylab::json::parse(json_text);
    *out = new barylab_space{barylab::MetricSpace::from_json(j)};
  });
}

void barylab_space_free(barylab_space* s) { delete s; }

barylab_status barylab_space_validate(const barylab_space* s, int samples,
                                      uint64_t seed, int* violations) {
  return guarded([&] {
    barylab::require(s != nullptr && violations != nullptr, "null argument");
    *violations = barylab::validate_metric(s->s, samples, seed).violations;
  });
}

barylab_status barylab_chain_from_json(const char* json_text,
                                       uint64_t default_seed,
                                       barylab_chain** out) {
  return guarded([&] {
    barylab::require(json_text != nullptr && out != nullptr,
                     "null argument");
    const barylab::json j = barylab::json::parse(json_text);
    *out = new barylab_chain{barylab::chain_from_json(j, default_seed)};
  });
}

barylab_status barylab_chain_generate(const char* kind, int n, uint64_t seed,
                                      barylab_chain** out) {
  return guarded([&] {
    barylab::require(kind != nullptr && out != nullptr, "null argument");
    *out = new barylab_chain{barylab::generate_chain(kind, n, seed)};
  });
}

void barylab_chain_free(barylab_chain* c) { delete c; }

int barylab_chain_size(const barylab_chain* c) {
  return c == nullptr ? 0 : c->c.size();
}

barylab_status barylab_chain_absolute_gap(const barylab_chain* c,
                                          double* gap) {
  return guarded([&] {
    barylab::require(c != nullptr && gap != nullptr, "null argument");
    *gap = barylab::absolute_gap(c->c);
  });
}

barylab_status barylab_chain_to_json(const barylab_chain* c,
                                     char** out_json) {
  return guarded([&] {
    barylab::require(c != nullptr && out_json != nullptr, "null argument");
    *out_json = dup_string(barylab::chain_to_json(c->c).dump());
  });
}

barylab_status barylab_run(const char* subcommand, const char* request_json,
                           char** report_json) {
  return guarded([&] {
    barylab::require(
        subcommand != nullptr && request_json != nullptr &&
            report_json != nullptr,
        "null argument");
    barylab::json req;
    try {
      req = barylab::json::parse(request_json);
    } catch (const std::exception& e) {
      throw barylab::input_error(std::string("request is not valid JSON: ") +
                                 e.what());
    }
    *report_json =
        dup_string(barylab::run_request(subcommand, req).dump(2) + "\n");
  });
}

barylab_status barylab_report_csv(const char* report_json, char** out_csv) {
  return guarded([&] {
    barylab::require(report_json != nullptr && out_csv != nullptr,
                     "null argument");
    barylab::json rep;
    try {
      rep = barylab::json::parse(report_json);
    } catch (const std::exception& e) {
      throw barylab::input_error(std::string("report is not valid JSON: ") +
                                 e.what());
    }
    *out_csv = dup_string(barylab::report_to_csv(rep));
  });
}

}  // extern "C"
