/* C interface to the FBM persistence toolkit.
 *
 * All functions return fbmre_status; outputs go through pointers. Objects
 * are opaque handles with explicit destroy functions. On any error the
 * thread-local message from fbmre_last_error() describes the failure.
 */
#ifndef FBMRE_H
#define FBMRE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fbmre_status {
    FBMRE_OK = 0,
    FBMRE_ERR_INVALID = 1,        /* bad arguments or config */
    FBMRE_ERR_DOMAIN = 2,         /* parameter outside the supported range */
    FBMRE_ERR_SIZE = 3,           /* a size cap was exceeded */
    FBMRE_ERR_NOT_PSD = 4,        /* circulant embedding failed */
    FBMRE_ERR_FACTORIZATION = 5,  /* dense factorization failed */
    FBMRE_ERR_PRECONDITION = 6,   /* a check precondition was violated */
    FBMRE_ERR_CHECK_FAILED = 7,   /* a verification run reported failures */
    FBMRE_ERR_RUNTIME = 8
} fbmre_status;

const char* fbmre_version(void);
/* Message for the most recent error on this thread; empty if none. */
const char* fbmre_last_error(void);

/* ------------------------------------------------------------------ */
/* Hurst-exponent laws                                                 */

typedef struct fbmre_law fbmre_law;

/* From a tagged JSON object, e.g. {"type":"uniform","a":0.4,"b":0.8}. */
fbmre_status fbmre_law_create_json(const char* json_text, fbmre_law** out);
void fbmre_law_destroy(fbmre_law* law);
fbmre_status fbmre_law_ess_sup(const fbmre_law* law, double* h0);
/* n draws using the given master seed (hurst stream domain). */
fbmre_status fbmre_law_sample(const fbmre_law* law, uint64_t seed, int64_t n, double* out);

/* ------------------------------------------------------------------ */
/* Path sampling                                                       */

/* Exact FBM on {k/m : k=0..ceil(T*m)}. out must hold ceil(T*m)+1 values;
 * out[0] = 0. hurst = 1 gives the degenerate linear process. */
fbmre_status fbmre_sample_path(double hurst, double horizon, int64_t points_per_unit,
                               uint64_t seed, double* out, int64_t out_len);
/* Dense-factorization oracle; same law, grid capped at 4096 points. */
fbmre_status fbmre_sample_path_cholesky(double hurst, double horizon, int64_t points_per_unit,
                                        uint64_t seed, double* out, int64_t out_len);

/* ------------------------------------------------------------------ */
/* Monte Carlo estimation                                              */

typedef struct fbmre_mc_config {
    int64_t n_paths;
    uint64_t seed;
    int64_t grid_m;    /* > 0: fixed points per unit; <= 0: paper rule */
    int64_t m_min;     /* paper-rule clamp, used when grid_m <= 0 */
    int64_t m_max;
    double barrier;    /* barrier for persistence events */
    double ci_level;   /* e.g. 0.95 */
    int workers;       /* 0 = hardware concurrency */
} fbmre_mc_config;

typedef struct fbmre_estimate {
    double p_hat;
    double std_err;
    double ci_lo;
    double ci_hi;
    int64_t n_paths;
    int64_t n_hits;
} fbmre_estimate;

fbmre_status fbmre_persistence_fixed(double hurst, double horizon, const fbmre_mc_config* cfg,
                                     fbmre_estimate* out);
fbmre_status fbmre_persistence_annealed(const fbmre_law* law, double horizon,
                                        const fbmre_mc_config* cfg, fbmre_estimate* out);
fbmre_status fbmre_small_barrier(const fbmre_law* law, double epsilon,
                                 const fbmre_mc_config* cfg, fbmre_estimate* out);

/* ------------------------------------------------------------------ */
/* Exponent fits                                                       */

typedef struct fbmre_fit {
    double slope;
    double slope_se;
    double intercept;
    double r_squared;
    int64_t n_points;
} fbmre_fit;

/* Weighted log-log regression of p on x (weights from std errors). */
fbmre_status fbmre_fit_exponent(const double* x, const double* p_hat, const double* std_err,
                                int64_t n, fbmre_fit* out);

fbmre_status fbmre_predicted_exponent_fixed(double hurst, double* out);
fbmre_status fbmre_predicted_exponent_annealed(const fbmre_law* law, double* out);
fbmre_status fbmre_predicted_exponent_small_barrier(const fbmre_law* law, double* out);

/* ------------------------------------------------------------------ */
/* Command runner (the CLI is a thin shell over this)                  */

/* command: persist | small-barrier | verify | bench | simulate.
 * config_json: the run document (must contain "seed").
 * out_dir: receives CSV/JSON artifacts plus a digest manifest.
 * exit_code: 0 ok, 1 validation, 2 numerical failure, 3 check failure. */
fbmre_status fbmre_run_command(const char* command, const char* config_json,
                               const char* out_dir, int* exit_code);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FBMRE_H */
