/* C interface to the Heyde-equation toolkit.
 *
 * All functions return hy_status; HY_OK means success.  On failure a
 * human-readable diagnostic is available from hy_last_error_message()
 * (thread-local, valid until the next call on the same thread).  Strings
 * returned through char** are heap-allocated JSON documents; release them
 * with hy_string_free. */
#ifndef HEYDE_H
#define HEYDE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hy_status {
  HY_OK = 0,
  HY_ERROR_INVALID_ARGUMENT = 1,
  HY_ERROR_PARSE = 2,
  HY_ERROR_DIMENSION_MISMATCH = 3,
  HY_ERROR_NOT_INVARIANT = 4,
  HY_ERROR_DOMAIN = 5,
  HY_ERROR_ATOM_BLOWUP = 6,
  HY_ERROR_NON_PSD = 7,
  HY_ERROR_ATOMS_OUTSIDE_KERNEL = 8,
  HY_ERROR_RESIDUAL_CHECK = 9,
  HY_ERROR_INTERNAL = 10
} hy_status;

const char* hy_status_name(hy_status status);

/* Thread-local message describing the most recent failure on this thread;
 * empty string after a successful call. */
const char* hy_last_error_message(void);

typedef struct hy_operator hy_operator;
typedef struct hy_distribution hy_distribution;

/* ---- operators ------------------------------------------------------- */

/* json_text: {"n": 2, "rows": [[-1.0, 1.0], [0.0, -1.0]]} */
hy_status hy_operator_parse(const char* json_text, hy_operator** out);

/* entries in row-major order, n x n, invertible */
hy_status hy_operator_create(int n, const double* entries, hy_operator** out);

/* -1 on the diagonal, +1 on the superdiagonal; n >= 2 */
hy_status hy_operator_jordan_cell(int n, hy_operator** out);

void hy_operator_free(hy_operator* op);
int hy_operator_dim(const hy_operator* op);

/* ---- distributions ---------------------------------------------------- */

/* json_text as documented for the CLI:
 *   {"gaussian": {"A": [[...]], "b": [...]},
 *    "atoms": [{"point": [...], "weight": 0.5}, ...],
 *    "shift": [...]}
 * every key optional.  expected_dim > 0 enforces a dimension; pass 0 to
 * infer it from the document. */
hy_status hy_distribution_parse(const char* json_text, int expected_dim,
                                hy_distribution** out);

hy_status hy_distribution_point_mass(int n, const double* x,
                                     hy_distribution** out);

void hy_distribution_free(hy_distribution* dist);
int hy_distribution_dim(const hy_distribution* dist);

/* characteristic function at y (array of length dim) */
hy_status hy_distribution_cf(const hy_distribution* dist, const double* y,
                             double* out_re, double* out_im);

/* ---- analysis --------------------------------------------------------- */

/* Spectral decomposition relative to -1 plus a spectral summary.
 * JSON out: {"command": "analyze", "operator": ..., "decomposition": ...,
 *            "spectrum": ...} */
hy_status hy_analyze(const hy_operator* op, char** out_json);

/* Solution-family classification (full case analysis when n == 2, coarse
 * structure otherwise).
 * JSON out: {"command": "classify", "operator": ..., "family": ...} */
hy_status hy_classify(const hy_operator* op, char** out_json);

/* Witness construction.  options_json may be NULL or an object with optional
 * keys:
 *   "omega_atoms": [{"point": [...], "weight": ...}, ...]  (must lie in K)
 *   "shift": [...]            seed x; the witness uses x2 = x, x1 = -alpha x
 *   "gaussian_scale": 1.0
 * JSON out: {"command": "construct", "operator": ..., "config": ...,
 *            "witness": ...} */
hy_status hy_construct(const hy_operator* op, const char* options_json,
                       char** out_json);

/* Residual verification of the functional equation(s) on a grid.
 * options_json may be NULL or an object with optional keys:
 *   "equation": "heyde" | "sd" | "both"   (default "heyde")
 *   "grid_step": 0.5, "grid_max": 2.0
 *   "seed": 0          (grid subsampling seed, used when n >= 3)
 *   "threshold": 1e-9  (rejection threshold on the sup residual)
 * out_rejected (nullable): set to 1 when any requested equation's sup
 * residual exceeds the threshold, else 0.
 * JSON out: {"command": "verify", "operator": ..., "config": ...,
 *            "reports": [...], "rejected": bool} */
hy_status hy_verify(const hy_operator* op, const hy_distribution* mu1,
                    const hy_distribution* mu2, const char* options_json,
                    char** out_json, int* out_rejected);

/* Monte-Carlo conditional-symmetry test.  options_json may be NULL or an
 * object with optional keys:
 *   "seed": 0
 *   "samples": 100000            (>= 10^4)
 *   "test_points": [{"u": [...], "v": [...]}, ...]
 *                                (default: 20 seeded random points)
 * JSON out: {"command": "simulate", "operator": ..., "config": ...,
 *            "report": ..., "rejected": bool} */
hy_status hy_simulate(const hy_operator* op, const hy_distribution* mu1,
                      const hy_distribution* mu2, const char* options_json,
                      char** out_json, int* out_rejected);

void hy_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* HEYDE_H */
