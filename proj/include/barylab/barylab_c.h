/* C interface to the barylab core. All entry points return a status code;
 * detailed diagnostics come from barylab_last_error(). Strings returned
 * through out-parameters are heap-allocated and must be released with
 * barylab_string_free. */
#ifndef BARYLAB_C_H
#define BARYLAB_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum barylab_status {
  BARYLAB_OK = 0,
  BARYLAB_EASSERT = 1,  /* a certified inequality or internal check failed */
  BARYLAB_EINPUT = 2,   /* malformed or out-of-contract input */
  BARYLAB_ERUNTIME = 3  /* unexpected failure */
} barylab_status;

typedef struct barylab_space barylab_space;
typedef struct barylab_chain barylab_chain;

const char* barylab_version(void);
/* Thread-local message describing the most recent failure. */
const char* barylab_last_error(void);
void barylab_string_free(char* s);

barylab_status barylab_space_from_json(const char* json_text,
                                       barylab_space** out);
void barylab_space_free(barylab_space* s);
/* Samples triangle-inequality triples; writes the violation count. */
barylab_status barylab_space_validate(const barylab_space* s, int samples,
                                      uint64_t seed, int* violations);

barylab_status barylab_chain_from_json(const char* json_text,
                                       uint64_t default_seed,
                                       barylab_chain** out);
barylab_status barylab_chain_generate(const char* kind, int n, uint64_t seed,
                                      barylab_chain** out);
void barylab_chain_free(barylab_chain* c);
int barylab_chain_size(const barylab_chain* c);
barylab_status barylab_chain_absolute_gap(const barylab_chain* c, double* gap);
barylab_status barylab_chain_to_json(const barylab_chain* c, char** out_json);

/* One-shot batch dispatch; subcommands: gamma, calculus, cotype, pisier,
 * counterexample, extend, hcert, kalton, genchain, verify. */
barylab_status barylab_run(const char* subcommand, const char* request_json,
                           char** report_json);

/* key,value CSV flattening of a JSON report. */
barylab_status barylab_report_csv(const char* report_json, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* BARYLAB_C_H */
