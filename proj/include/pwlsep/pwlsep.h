/* C interface of the piecewise linear separation library.
 *
 * Every fallible call returns a pwlsep_status; on failure the message is
 * available from pwlsep_last_error() on the same thread. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * pwlsep_string_free().
 */
#ifndef PWLSEP_H
#define PWLSEP_H

#include <stddef.h>
#include <stdint.h>

#if defined(PWLSEP_BUILDING_LIBRARY)
#define PWLSEP_API __attribute__((visibility("default")))
#else
#define PWLSEP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwlsep_status {
  PWLSEP_OK = 0,
  PWLSEP_ERR_INPUT = 1,          /* malformed file, unknown name, bad argument */
  PWLSEP_ERR_IO = 2,             /* file could not be read or written */
  PWLSEP_ERR_PRECONDITION = 3,   /* operation outside its domain (e.g. too many variables) */
  PWLSEP_ERR_LIMIT = 4,          /* time or node limit reached; output is still produced */
  PWLSEP_ERR_CONTRADICTION = 5,  /* a verified statement failed */
  PWLSEP_ERR_INTERNAL = 6
} pwlsep_status;

typedef struct pwlsep_instance pwlsep_instance;
typedef struct pwlsep_result pwlsep_result;

typedef struct pwlsep_solve_options {
  double time_limit;         /* seconds, 0 = none */
  size_t node_limit;         /* 0 = none */
  size_t workers;            /* >= 1 */
  uint64_t seed;             /* recorded only */
  const char* cut_families;  /* comma list of convex-inclusion,obstacle,rank,mirrored; NULL = all, "" = none */
  int float_lp;              /* nonzero: float LP with exact fallback */
  int minimize_outliers;     /* objective form; same optimum */
} pwlsep_solve_options;

PWLSEP_API const char* pwlsep_version(void);
PWLSEP_API const char* pwlsep_last_error(void);
PWLSEP_API void pwlsep_string_free(char* s);

/* ---- instances */

/* JSON or CSV, chosen by the ".csv" extension. */
PWLSEP_API pwlsep_status pwlsep_instance_load(const char* path, pwlsep_instance** out);
PWLSEP_API pwlsep_status pwlsep_instance_parse(const char* json_text, pwlsep_instance** out);
/* Budgets <= 0 keep the family default. */
PWLSEP_API pwlsep_status pwlsep_instance_generate(const char* family, uint64_t seed, int blue_groups, int red_groups,
                                                  pwlsep_instance** out);
PWLSEP_API pwlsep_status pwlsep_instance_set_budgets(pwlsep_instance* inst, size_t blue_groups, size_t red_groups);
PWLSEP_API pwlsep_status pwlsep_instance_save(const pwlsep_instance* inst, const char* path);
PWLSEP_API pwlsep_status pwlsep_instance_to_json(const pwlsep_instance* inst, char** out);
PWLSEP_API size_t pwlsep_instance_size(const pwlsep_instance* inst);
PWLSEP_API size_t pwlsep_instance_dimension(const pwlsep_instance* inst);
PWLSEP_API size_t pwlsep_instance_num_z(const pwlsep_instance* inst);
PWLSEP_API void pwlsep_instance_free(pwlsep_instance* inst);

/* Comma-separated family names understood by pwlsep_instance_generate. */
PWLSEP_API pwlsep_status pwlsep_families(char** out);

/* ---- solving */

PWLSEP_API void pwlsep_solve_options_init(pwlsep_solve_options* opt);
/* Returns PWLSEP_ERR_LIMIT with a valid *out when a limit stopped the search. */
PWLSEP_API pwlsep_status pwlsep_solve(const pwlsep_instance* inst, const pwlsep_solve_options* opt,
                                      pwlsep_result** out);
/* Exhaustive reference optimum; at most 24 z-variables. */
PWLSEP_API pwlsep_status pwlsep_solve_enumerative(const pwlsep_instance* inst, pwlsep_result** out);
PWLSEP_API int pwlsep_result_optimal(const pwlsep_result* r);
PWLSEP_API size_t pwlsep_result_assigned(const pwlsep_result* r);
PWLSEP_API size_t pwlsep_result_outlier_count(const pwlsep_result* r);
/* Group of point i, -1 for outliers or out-of-range i. */
PWLSEP_API int pwlsep_result_group(const pwlsep_result* r, size_t point);
PWLSEP_API pwlsep_status pwlsep_result_to_json(const pwlsep_result* r, int as_float, char** out);
/* One JSON object per line for every projection cut, with its spawning assignment. */
PWLSEP_API pwlsep_status pwlsep_result_farkas_jsonl(const pwlsep_result* r, char** out);
PWLSEP_API void pwlsep_result_free(pwlsep_result* r);

/* ---- cuts, export, plotting */

/* Every generatable cut as JSON lines. With audit != 0 each cut is checked
 * against all feasible assignments (at most 24 z-variables) and
 * PWLSEP_ERR_CONTRADICTION is returned if one is violated. */
PWLSEP_API pwlsep_status pwlsep_cuts_jsonl(const pwlsep_instance* inst, const char* cut_families, int audit,
                                           int as_float, char** out);
/* big_m: rational text or NULL for the default. */
PWLSEP_API pwlsep_status pwlsep_export_lp(const pwlsep_instance* inst, const char* big_m, int minimize_outliers,
                                          char** out);
/* r may be NULL. size/radius <= 0 use defaults. */
PWLSEP_API pwlsep_status pwlsep_plot_svg(const pwlsep_instance* inst, const pwlsep_result* r, double size,
                                         double radius, char** out);

/* ---- polytope lab */

/* theorems: comma list or NULL for all. Writes the JSON report and a text
 * summary; returns PWLSEP_ERR_CONTRADICTION if any case contradicts. */
PWLSEP_API pwlsep_status pwlsep_theorem_suite(const char* theorems, size_t instances, uint64_t base_seed,
                                              size_t workers, char** json_out, char** text_out);
/* Comma list of theorem family names. */
PWLSEP_API pwlsep_status pwlsep_theorem_names(char** out);
/* cut_json: {"coeffs": {z-name: value}, "rhs": value}. Writes a facet report;
 * PWLSEP_ERR_CONTRADICTION when the inequality is not valid. */
PWLSEP_API pwlsep_status pwlsep_check_inequality(const pwlsep_instance* inst, const char* cut_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
