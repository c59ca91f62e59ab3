#ifndef CHOICEAPPROX_H
#define CHOICEAPPROX_H

#include <stddef.h>
#include <stdint.h>

#if defined(CHOICEAPPROX_BUILDING)
#define CA_API __attribute__((visibility("default")))
#else
#define CA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum {
  CA_OK = 0,
  CA_ERR_USAGE = 1,
  CA_ERR_DATA = 2,
  CA_ERR_NUMERIC = 3
} ca_status;

typedef enum { CA_FORMAT_TEXT = 0, CA_FORMAT_CSV = 1, CA_FORMAT_JSON = 2 } ca_format;
typedef enum { CA_ENGINE_GREEDY = 0, CA_ENGINE_EM = 1 } ca_engine;

typedef struct ca_space ca_space;
typedef struct ca_choice ca_choice;
typedef struct ca_report ca_report;

typedef struct {
  int steps;
  int restarts;
  int inner_iterations;
  uint64_t seed;
} ca_greedy_config;

typedef struct {
  size_t mixtures; /* 0: mixture bound of the space */
  int random_inits;
  uint64_t seed;
  double tolerance;
  int max_iterations;
} ca_em_config;

typedef struct {
  double min;
  double max;
  double step;
  int exhaustive; /* nonzero: run the full engine at every grid point */
  int screen_steps;
  int screen_restarts;
  int screen_inner_iterations;
  size_t refine;
} ca_grid_config;

typedef struct {
  ca_greedy_config greedy;
  ca_em_config em;
  ca_grid_config grid;
  int run_greedy;
  int run_em;
  const int* degrees; /* NULL: {1, 2} */
  size_t degree_count;
  size_t jobs;
} ca_table_config;

CA_API const char* ca_version(void);

/* Message of the last failed call on this thread; empty after success. */
CA_API const char* ca_last_error(void);

/* Frees strings returned through char** out-parameters. */
CA_API void ca_string_free(char* s);

CA_API void ca_greedy_config_init(ca_greedy_config* config);
CA_API void ca_em_config_init(ca_em_config* config);
CA_API void ca_grid_config_init(ca_grid_config* config);
CA_API void ca_table_config_init(ca_table_config* config);

/* Spaces use every subset of two or more alternatives as menus, unless built
   with single_menu != 0, in which case X itself is the only menu. */
CA_API ca_status ca_space_builtin(const char* name, ca_space** out);
CA_API ca_status ca_space_load(const char* path, ca_space** out);
CA_API ca_status ca_space_from_arrays(size_t alternatives, size_t k, const char* const* ids, const double* chars,
                                      int single_menu, ca_space** out);
CA_API void ca_space_free(ca_space* space);
CA_API size_t ca_space_size(const ca_space* space);
CA_API size_t ca_space_characteristics(const ca_space* space);
CA_API size_t ca_space_menu_count(const ca_space* space);
CA_API size_t ca_space_entry_count(const ca_space* space);
CA_API ca_status ca_space_save(const ca_space* space, const char* path);

CA_API ca_status ca_choice_vertex(const ca_space* space, const char* ranking, ca_choice** out);
/* alpha rho^pi + (1 - alpha) rho^{reverse(pi)} */
CA_API ca_status ca_choice_mixture(const ca_space* space, const char* ranking, double alpha, ca_choice** out);
CA_API ca_status ca_choice_uniform(const ca_space* space, ca_choice** out);
CA_API ca_status ca_choice_load(const ca_space* space, const char* path, ca_choice** out);
CA_API ca_status ca_choice_from_values(const ca_space* space, const double* values, size_t count, ca_choice** out);
CA_API ca_status ca_choice_save(const ca_choice* choice, const char* path);
CA_API void ca_choice_free(ca_choice* choice);
/* Copies up to capacity entries; *count receives the full entry count. */
CA_API ca_status ca_choice_values(const ca_choice* choice, double* out, size_t capacity, size_t* count);

CA_API ca_status ca_distance(const ca_choice* a, const ca_choice* b, double* out);
CA_API ca_status ca_is_representable(const ca_space* space, const char* ranking, int degree, int* out);
CA_API ca_status ca_greedy_bound(const ca_space* space, int steps, double* out);
CA_API ca_status ca_mixture_bound(const ca_space* space, size_t* out);

/* eta may be NULL (zero fixed effects) or hold one value per alternative. */
CA_API ca_status ca_fit_greedy(const ca_choice* target, int degree, const ca_greedy_config* config, const double* eta,
                               ca_report** out);
CA_API ca_status ca_fit_em(const ca_choice* target, int degree, const ca_em_config* config, const double* eta,
                           ca_report** out);
CA_API ca_status ca_fit_fixed_effects(const ca_choice* target, int degree, ca_engine engine,
                                      const ca_greedy_config* greedy, const ca_em_config* em,
                                      const ca_grid_config* grid, size_t jobs, ca_report** out);
CA_API void ca_report_free(ca_report* report);
CA_API double ca_report_error(const ca_report* report);
CA_API int ca_report_iterations(const ca_report* report);
CA_API size_t ca_report_components(const ca_report* report);
CA_API size_t ca_report_trace(const ca_report* report, double* out, size_t capacity);
CA_API size_t ca_report_likelihood_trace(const ca_report* report, double* out, size_t capacity);
CA_API size_t ca_report_eta(const ca_report* report, double* out, size_t capacity);
/* Choice function of the fitted mixture. */
CA_API ca_status ca_report_choice(const ca_report* report, ca_choice** out);
CA_API ca_status ca_report_render(const ca_report* report, ca_format format, char** out);

CA_API ca_status ca_run_diagnose(const ca_space* space, int degree, size_t jobs, ca_format format, char** out);
CA_API ca_status ca_run_census(const ca_space* space, int degree, size_t jobs, ca_format format, char** out);
CA_API ca_status ca_run_table1(const ca_space* space, const ca_table_config* config, ca_format format, char** out);
CA_API ca_status ca_run_table2(const ca_space* space, const ca_table_config* config, ca_format format, char** out);
CA_API ca_status ca_run_certificate(const ca_space* space, const char* ranking, ca_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif
