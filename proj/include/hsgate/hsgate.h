/* C interface to the hairpin seesaw gate toolkit.
 *
 * Every call returns an hsgate_status. On failure, hsgate_last_error()
 * describes the problem; the message belongs to the calling thread and
 * stays valid until that thread's next call. Strings returned through a
 * char** out-parameter are released with hsgate_string_free. */
#ifndef HSGATE_H
#define HSGATE_H

#include <stddef.h>
#include <stdint.h>

#if defined(HSGATE_BUILDING_LIBRARY)
#define HSGATE_API __attribute__((visibility("default")))
#else
#define HSGATE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hsgate_status {
  HSGATE_OK = 0,
  HSGATE_ERR_VALIDATION = 1,
  HSGATE_ERR_NUMERICAL = 2,
  HSGATE_ERR_IO = 3,
  HSGATE_ERR_INTERNAL = 4
} hsgate_status;

typedef struct hsgate_config hsgate_config;
typedef struct hsgate_trace hsgate_trace;
typedef struct hsgate_fit hsgate_fit;
typedef struct hsgate_design hsgate_design;

HSGATE_API const char* hsgate_version(void);
HSGATE_API const char* hsgate_last_error(void);
HSGATE_API void hsgate_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

HSGATE_API hsgate_status hsgate_config_load(const char* path, hsgate_config** out);
HSGATE_API hsgate_status hsgate_config_parse(const char* json_text, hsgate_config** out);
/* Renewal protocol for the single motif. keep_fuel_ratio selects the
 * alternative doubling rule. */
HSGATE_API hsgate_status hsgate_config_renewal(int n_cycles, double phase_s, int doubling, int keep_fuel_ratio,
                                               hsgate_config** out);
/* OR gate over comma-separated cases such as "00,01,10,11". */
HSGATE_API hsgate_status hsgate_config_orgate(const char* cases, double phase_s, hsgate_config** out);
HSGATE_API void hsgate_config_free(hsgate_config* cfg);

/* Overrides; pass NaN to leave a rate unchanged. */
HSGATE_API hsgate_status hsgate_config_set_rates(hsgate_config* cfg, double k_t, double k_rep, double k_leak);
HSGATE_API hsgate_status hsgate_config_set_tolerances(hsgate_config* cfg, double rtol, double atol);
HSGATE_API hsgate_status hsgate_config_set_normalization(hsgate_config* cfg, const char* mode);
HSGATE_API hsgate_status hsgate_config_set_seed(hsgate_config* cfg, uint64_t seed);
HSGATE_API hsgate_status hsgate_config_set_efficiency(hsgate_config* cfg, const double* values, size_t n);
HSGATE_API hsgate_status hsgate_config_set_output_dt(hsgate_config* cfg, double dt_s);
HSGATE_API hsgate_status hsgate_config_get_seed(const hsgate_config* cfg, uint64_t* seed);
HSGATE_API hsgate_status hsgate_config_to_json(const hsgate_config* cfg, char** out);
/* Curated reaction list, one channel per line. */
HSGATE_API hsgate_status hsgate_config_network_dump(const hsgate_config* cfg, char** out);

/* ---- simulation ------------------------------------------------------- */

HSGATE_API hsgate_status hsgate_simulate(const hsgate_config* cfg, hsgate_trace** out);
HSGATE_API void hsgate_trace_free(hsgate_trace* tr);

HSGATE_API size_t hsgate_trace_length(const hsgate_trace* tr);
HSGATE_API size_t hsgate_trace_species_count(const hsgate_trace* tr);
/* NULL when out of range. */
HSGATE_API const char* hsgate_trace_species_name(const hsgate_trace* tr, size_t j);
HSGATE_API hsgate_status hsgate_trace_time(const hsgate_trace* tr, size_t i, double* t_s);
HSGATE_API hsgate_status hsgate_trace_signal(const hsgate_trace* tr, size_t i, double* value);
HSGATE_API hsgate_status hsgate_trace_conc_nM(const hsgate_trace* tr, size_t i, size_t j, double* nM);
/* Distinct injection timestamps. */
HSGATE_API size_t hsgate_trace_event_count(const hsgate_trace* tr);
HSGATE_API hsgate_status hsgate_trace_event_time(const hsgate_trace* tr, size_t k, double* t_s);

HSGATE_API hsgate_status hsgate_trace_write_csv(const hsgate_trace* tr, const char* path);
HSGATE_API hsgate_status hsgate_trace_write_svg(const hsgate_trace* tr, const char* path, const char* title);
/* Data CSV (time_s,signal) with Gaussian noise of noise_frac * max signal. */
HSGATE_API hsgate_status hsgate_trace_write_noisy(const hsgate_trace* tr, const char* path, double noise_frac,
                                                  uint64_t seed);

/* ---- fitting ---------------------------------------------------------- */

/* Fits k_t to a data CSV using the config's model and schedule. NaN bounds
 * fall back to the config. */
HSGATE_API hsgate_status hsgate_fit_run(const hsgate_config* cfg, const char* data_path, double k_min, double k_max,
                                        hsgate_fit** out);
HSGATE_API hsgate_status hsgate_fit_k_hat(const hsgate_fit* fit, double* k_hat);
HSGATE_API hsgate_status hsgate_fit_report_json(const hsgate_fit* fit, char** out);
HSGATE_API void hsgate_fit_free(hsgate_fit* fit);

/* ---- reaction enumeration --------------------------------------------- */

/* Closure from the motif seed species (G, I, F, R, Iex, Fex). On overflow
 * returns HSGATE_ERR_VALIDATION and the error lists the unexplored species. */
HSGATE_API hsgate_status hsgate_enumerate_motif(int max_species, int collapse_reclosure, double k_t, double k_rep,
                                                double k_leak, char** dump, int* species_count);

/* ---- sequence design -------------------------------------------------- */

/* catalog_path NULL designs the built-in motif catalog. */
HSGATE_API hsgate_status hsgate_design_run(const char* catalog_path, uint64_t seed, int max_homopolymer,
                                           int crosstalk_limit, long max_attempts, hsgate_design** out);
HSGATE_API hsgate_status hsgate_design_table(const hsgate_design* d, char** out);
HSGATE_API hsgate_status hsgate_design_crosstalk(const hsgate_design* d, int* score);
/* *ok is 1 when every check passes; the report has one `name<TAB>PASS|FAIL<TAB>detail` line per check. */
HSGATE_API hsgate_status hsgate_design_validate(const hsgate_design* d, int* ok, char** report);
HSGATE_API void hsgate_design_free(hsgate_design* d);

#ifdef __cplusplus
}
#endif

#endif /* HSGATE_H */
