/* C interface to the mcrsim library. All handles are opaque; every call that
 * can fail returns an mcr_status and leaves a message in mcr_last_error(),
 * which is per thread and valid until the next failing call on that thread. */
#ifndef MCRSIM_MCR_H
#define MCRSIM_MCR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MCR_API __declspec(dllexport)
#else
#define MCR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcr_status {
  MCR_OK = 0,
  MCR_ERR_PARSE = 1,
  MCR_ERR_INVARIANT = 2,
  MCR_ERR_ARGUMENT = 3,
  MCR_ERR_NUMERICAL = 4,
  MCR_ERR_INFEASIBLE = 5,
  MCR_ERR_IO = 6,
  MCR_ERR_INTERNAL = 7
} mcr_status;

typedef struct mcr_config mcr_config;
typedef struct mcr_model mcr_model;
typedef struct mcr_seem_result mcr_seem_result;
typedef struct mcr_validation mcr_validation;

MCR_API const char* mcr_last_error(void);
MCR_API const char* mcr_version(void);

/* Configuration text: "key = value" lines. */
MCR_API mcr_status mcr_config_new(mcr_config** out);
MCR_API mcr_status mcr_config_parse(const char* text, mcr_config** out);
MCR_API mcr_status mcr_config_load(const char* path, mcr_config** out);
MCR_API mcr_status mcr_config_clone(const mcr_config* cfg, mcr_config** out);
MCR_API mcr_status mcr_config_set(mcr_config* cfg, const char* key, const char* value);
/* "key=value" */
MCR_API mcr_status mcr_config_set_assignment(mcr_config* cfg, const char* assignment);
MCR_API void mcr_config_free(mcr_config* cfg);
MCR_API int mcr_is_known_key(const char* key);

/* Parses and validates; fails with MCR_ERR_INVARIANT naming the broken
 * constraint. */
MCR_API mcr_status mcr_model_build(const mcr_config* cfg, mcr_model** out);
MCR_API void mcr_model_free(mcr_model* model);
MCR_API uint64_t mcr_model_hash(const mcr_model* model);
MCR_API size_t mcr_model_warning_count(const mcr_model* model);
MCR_API const char* mcr_model_warning(const mcr_model* model, size_t i);
MCR_API size_t mcr_model_assumed_count(const mcr_model* model);
MCR_API const char* mcr_model_assumed(const mcr_model* model, size_t i);
/* Canonical SI emission; release with mcr_string_free. */
MCR_API mcr_status mcr_model_emit(const mcr_model* model, char** out);
MCR_API void mcr_string_free(char* s);

/* Named scalar outputs (delays in s, densities per m^2, energies J/m^2). */
MCR_API size_t mcr_quantity_count(void);
MCR_API const char* mcr_quantity_name(size_t i);
MCR_API mcr_status mcr_evaluate(const mcr_model* model, const char* quantity, double* out);

typedef struct mcr_latency {
  double d_ul_req_tx;
  double d_ul_req_queue;
  double d_dl_deli;
  double d_dl_bh;
  double d_dl_as;
  double d_fiber_term;
  double total;
} mcr_latency;

/* Uses the MCR backhaul of the model's cooperating EDCs. */
MCR_API mcr_status mcr_total_latency(const mcr_model* model, mcr_latency* out);

typedef struct mcr_pair {
  int psi;
  double lambda_e_crit; /* per m^2 */
  double residual;      /* s */
  int at_lower_bound;
  double e_sys; /* J/m^2 */
} mcr_pair;

/* b_paths = 0 keeps the model's path count. On an empty feasible set returns
 * MCR_ERR_INFEASIBLE and stores the reduced budget in *budget_out if given. */
MCR_API mcr_status mcr_optimize(const mcr_model* model, int b_paths, int jobs,
                                mcr_seem_result** out, double* budget_out);
MCR_API double mcr_seem_budget(const mcr_seem_result* r);
MCR_API mcr_pair mcr_seem_best(const mcr_seem_result* r);
MCR_API size_t mcr_seem_feasible_count(const mcr_seem_result* r);
MCR_API mcr_pair mcr_seem_feasible(const mcr_seem_result* r, size_t i);
MCR_API size_t mcr_seem_skipped_count(const mcr_seem_result* r);
MCR_API int mcr_seem_skipped_psi(const mcr_seem_result* r, size_t i);
MCR_API const char* mcr_seem_skipped_reason(const mcr_seem_result* r, size_t i);
MCR_API void mcr_seem_free(mcr_seem_result* r);

typedef struct mcr_check {
  const char* name;
  double analytic;
  double mc_mean;
  double std_error;
  double z;
  uint64_t n_samples;
  const char* criterion; /* "3se" or "5pct" */
  int pass;
} mcr_check;

MCR_API mcr_status mcr_validate(const mcr_model* model, uint64_t trials, uint64_t seed,
                                int jobs, mcr_validation** out);
MCR_API size_t mcr_validation_count(const mcr_validation* v);
/* Strings stay valid until mcr_validation_free. */
MCR_API mcr_check mcr_validation_get(const mcr_validation* v, size_t i);
MCR_API void mcr_validation_free(mcr_validation* v);

typedef enum mcr_backhaul_mode { MCR_BACKHAUL_MCR = 0, MCR_BACKHAUL_SINGLE = 1 } mcr_backhaul_mode;
typedef enum mcr_topology {
  MCR_TOPOLOGY_MEAN_DISTANCE = 0, /* EDCs at their mean distances */
  MCR_TOPOLOGY_SAMPLED = 1        /* fresh PPP per trial */
} mcr_topology;

typedef struct mcr_sim_result {
  double mean; /* s */
  double std_error;
  uint64_t n_samples;
  uint64_t discarded;
} mcr_sim_result;

/* trace_path may be NULL; otherwise one JSON object per trial is written. */
MCR_API mcr_status mcr_simulate_backhaul(const mcr_model* model, mcr_backhaul_mode mode,
                                         mcr_topology topology, uint64_t trials,
                                         uint64_t seed, int jobs, const char* trace_path,
                                         mcr_sim_result* out);

#ifdef __cplusplus
}
#endif

#endif
