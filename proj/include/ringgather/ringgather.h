/* C interface to the ring gathering model, simulator and checker.
 *
 * Every function returns an rg_status. On failure rg_last_error() describes
 * the problem (thread-local, valid until the next call on the same thread).
 * Strings returned through char** are owned by the caller and must be
 * released with rg_string_free(). */

#ifndef RINGGATHER_H
#define RINGGATHER_H

#include <stdint.h>

#if defined(RINGGATHER_BUILDING)
#define RG_API __attribute__((visibility("default")))
#else
#define RG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_FAIL = 1,          /* a checked property failed */
  RG_INVALID = 2,       /* bad input: pattern, flags, files */
  RG_NOT_GATHERED = 3,  /* simulation ended without gathering */
  RG_INCONCLUSIVE = 4,  /* state budget exhausted */
  RG_INTERNAL = 5
} rg_status;

typedef struct rg_config rg_config;
typedef struct rg_algorithm rg_algorithm;

RG_API const char* rg_last_error(void);
RG_API void rg_string_free(char* s);

/* Configurations. With n == 0 the ring size is the pattern length. */
RG_API rg_status rg_config_parse(const char* pattern, int n, int phi, rg_config** out);
RG_API void rg_config_free(rg_config* config);
RG_API rg_status rg_config_pattern(const rg_config* config, char** out);

typedef struct rg_config_info {
  int n;
  int phi;
  int robots;
  int borders;
  int gathered;
  int connected;
  int edge_symmetric;
  /* -1 unless the configuration has two borders or is gathered */
  int m, o, d, h_inner, h_max;
} rg_config_info;

RG_API rg_status rg_config_describe(const rg_config* config, rg_config_info* out);

/* Newline-separated violations; empty string when valid. parity is
 * "m-odd", "m-even-o-odd" or "any". */
RG_API rg_status rg_config_validate(const rg_config* config, const char* parity, char** out);

/* Algorithms: "alg1" or "alg2". strict_question_mark reads '?' as non-empty. */
RG_API rg_status rg_algorithm_new(const char* name, int strict_question_mark, rg_algorithm** out);
RG_API void rg_algorithm_free(rg_algorithm* alg);
RG_API rg_status rg_algorithm_dump(const rg_algorithm* alg, char** out);

typedef enum rg_scheduler {
  RG_SCHED_ROUND_ROBIN = 0,
  RG_SCHED_RANDOM = 1,
  RG_SCHED_SYNC = 2,
  RG_SCHED_SCRIPT = 3,
  RG_SCHED_SYMMETRIC = 4
} rg_scheduler;

typedef struct rg_simulate_options {
  rg_scheduler scheduler;
  int has_seed;
  uint64_t seed;
  const char* script_json; /* RG_SCHED_SCRIPT: [{"robot":0,"phase":"look"},...] */
  uint64_t max_steps;
} rg_simulate_options;

RG_API void rg_simulate_options_default(rg_simulate_options* opts);

/* Runs one execution. RG_OK when it ends stably gathered, RG_NOT_GATHERED
 * otherwise; *outcome is gathered, step-limit, recurrence or scheduler-end. */
RG_API rg_status rg_simulate(const rg_config* config, const rg_algorithm* alg, const rg_simulate_options* opts,
                             char** trace_jsonl, char** outcome);

/* Replays a trace and returns the final configuration pattern. */
RG_API rg_status rg_replay(const char* trace_jsonl, char** final_pattern);

typedef struct rg_check_options {
  uint64_t state_budget;
  int workers;
  int symmetry_reduction;
  int safety;
  int liveness;
  int parity;
  int megacycles;
  int lemma2;
  int timing; /* include wall time in the report */
} rg_check_options;

RG_API void rg_check_options_default(rg_check_options* opts);

/* Exhaustive check. RG_OK all pass, RG_FAIL any fail, RG_INCONCLUSIVE budget. */
RG_API rg_status rg_check(const rg_config* config, const rg_algorithm* alg, const rg_check_options* opts,
                          char** report_json);

/* Parity and mega-cycle checks along one recorded trace. */
RG_API rg_status rg_check_trace(const char* trace_jsonl, char** report_json);

/* kind "symmetric" (bound = step bound) or "multiborder" (bound = state
 * budget). RG_OK when the impossibility behavior is exhibited. */
RG_API rg_status rg_demo(const char* kind, const rg_config* config, const rg_algorithm* alg, uint64_t bound,
                         char** report_json);

typedef struct rg_enum_filter {
  int n_min, n_max;
  int r_min, r_max;
  int phi;
  int towers_allowed;
  int tower_cap;
  const char* parity;
  int dedup;
} rg_enum_filter;

RG_API void rg_enum_filter_default(rg_enum_filter* filter);

/* One full-ring pattern per line. */
RG_API rg_status rg_enumerate(const rg_enum_filter* filter, char** patterns);

#ifdef __cplusplus
}
#endif

#endif
