/* C API for the domeforge library.
 *
 * All structured data crosses the boundary as JSON strings (UTF-8). Strings
 * returned through an out-parameter are owned by the caller and must be
 * released with df_string_free. Handles are opaque; every function returns a
 * df_status, with df_last_error() holding the most recent failure message for
 * the calling thread.
 */
#ifndef DOMEFORGE_H
#define DOMEFORGE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum df_status {
  DF_OK = 0,
  DF_ERR_INVALID_INPUT = 1,
  DF_ERR_DEGENERATE = 2,
  DF_ERR_OUT_OF_DOMAIN = 3,
  DF_ERR_NON_TRANSVERSE = 4,
  DF_ERR_BUDGET = 5,
  DF_ERR_INTERNAL = 6
} df_status;

typedef struct df_domain df_domain;

const char* df_version(void);
const char* df_last_error(void);
void df_string_free(char* s);

/* points_json: {"points": [{"re":..,"im":..} | "inf", ...]} */
df_status df_domain_create(const char* points_json, df_domain** out);
void df_domain_free(df_domain* d);

/* Hull combinatorics: {vertices, faces, edges:[{v, faces, theta}], doubled}. */
df_status df_domain_hull_json(const df_domain* d, char** out);

/* Retraction at z: {foot:{kind, id, chart, ambient}, h, tau}. */
df_status df_domain_retract(const df_domain* d, double re, double im, char** out);

/* Pointwise metrics at z: {q, beta, rho_lower, rho_upper, tau}. */
df_status df_domain_metric(const df_domain* d, double re, double im, char** out);

/* request: {a:{face,re,im}, b:{face,re,im}} ->
 * {distance, certified, crossings:[{edge,theta,angle}]}. */
df_status df_domain_dome_distance(const df_domain* d, const char* request_json, char** out);

/* request: {z:{re,im}, w:{re,im}, spacings?:[..], target_gap?:..} ->
 * {lower, upper, refined_to, converged}. */
df_status df_domain_tau_distance(const df_domain* d, const char* request_json, char** out);

/* Cell decomposition drawing; viewport_json may be "" for defaults
 * ({x,y,width,height,scale}). Output is an SVG document. */
df_status df_domain_svg(const df_domain* d, const char* viewport_json, char** out);

/* Round annulus 1 < |z| < e^s: {q, beta, rho_exact, tau}. */
df_status df_annulus_metric(double s, double re, double im, char** out);

/* request: {s, n_schedule?:[..]} -> closed forms and finite-approximation
 * core lengths. */
df_status df_annulus_report(const char* request_json, char** out);

/* The explicit constant table as JSON. */
df_status df_constants(char** out);

/* config: {suite, seed?, params?, timing?}. Returns the report JSON and sets
 * *aggregate_pass to 1 or 0. */
df_status df_run_suite(const char* config_json, char** report_json, int* aggregate_pass);

/* Names of the available verification suites as a JSON array. */
df_status df_suite_names(char** out);

#ifdef __cplusplus
}
#endif

#endif /* DOMEFORGE_H */
