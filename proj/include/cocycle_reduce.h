/* C interface to the cocycle reduction library.
 *
 * All entry points take UTF-8 JSON configuration strings and hand back an
 * opaque result object carrying the JSON artifact plus, where applicable, an
 * NDJSON trace and a CSV table. Results must be released with
 * ccr_result_free. Status codes mirror the CLI exit codes.
 */
#ifndef COCYCLE_REDUCE_H
#define COCYCLE_REDUCE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ccr_status {
    CCR_OK = 0,
    CCR_INPUT_ERROR = 2,
    CCR_RESONANCE_BLOCKED = 3,
    CCR_PRECONDITION_FAILED = 4,
    CCR_BUDGET_EXHAUSTED = 5,
    CCR_NUMERICAL_FAILURE = 6,
    CCR_INTERNAL_ERROR = 7
} ccr_status;

typedef struct ccr_result ccr_result;

const char* ccr_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
const char* ccr_last_error(void);

/* Continued-fraction table + Definition-1 subsequence for an alpha spec
 * ("golden", "pi-3", "liouville(k)", or a decimal literal). */
ccr_status ccr_cf(const char* alpha_spec, int terms, ccr_result** out);

/* Fibered rotation number of the Schrodinger cocycle described by config
 * {alpha, potential, E}. Artifact: {"rho": ..., "err": ...}. */
ccr_status ccr_rotnum(const char* config_json, ccr_result** out);

/* Full reduction. Artifact: result bundle {B, phi, report}; trace: NDJSON,
 * one line per scheme step. Status reflects the scheme outcome. */
ccr_status ccr_reduce(const char* config_json, ccr_result** out);

/* Energy sweep over config.E_grid. Artifact: row summary JSON; csv: the
 * sweep table. Per-row failures are recorded in rows, not in the status. */
ccr_status ccr_sweep(const char* config_json, ccr_result** out);

/* Built-in sanity checks; artifact lists each check with pass/fail. */
ccr_status ccr_selftest(ccr_result** out);

/* Accessors; the returned strings live as long as the result object. */
const char* ccr_result_json(const ccr_result* r);
const char* ccr_result_trace(const ccr_result* r);
const char* ccr_result_csv(const ccr_result* r);

void ccr_result_free(ccr_result* r);

#ifdef __cplusplus
}
#endif

#endif /* COCYCLE_REDUCE_H */
