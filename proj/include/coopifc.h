/* C interface to the cooperative interference-channel bound library.
 *
 * Every function returns a status code. Functions producing text allocate
 * the result with malloc; release it with coopifc_string_free. On failure
 * *err (when non-NULL) receives an allocated diagnostic message. */
#ifndef COOPIFC_H
#define COOPIFC_H

#ifdef __cplusplus
extern "C" {
#endif

#define COOPIFC_OK 0
#define COOPIFC_EINVAL 2      /* malformed or invalid input */
#define COOPIFC_EDEGENERATE 3 /* numerically degenerate conditioning */

/* Opaque channel instance: gain matrix, powers, noise covariance,
 * out-of-band link capacities, optional fixed input covariance, and the
 * out-of-band budget fractions used by the bound evaluators. */
typedef struct coopifc_channel coopifc_channel;

void coopifc_string_free(char* s);
void coopifc_channel_free(coopifc_channel* ch);

/* Parses a channel JSON file (keys K, H, P, SigmaZ, C, optional Q) and
 * validates it; validation diagnostics are joined into *err. */
int coopifc_channel_parse(const char* json_text, coopifc_channel** out,
                          char** err);

/* Builds the symmetric two-user channel from a JSON config (keys snr, alpha,
 * alpha_tilde, beta_s, beta_d, gamma, kappa). `mode` selects a cooperation
 * preset by name ("no-coop", "in-band-source", "out-of-band-source",
 * "output-feedback", "rate-limited-feedback", "two-way-like"); NULL builds
 * the config verbatim with every link active. */
int coopifc_channel_from_symmetric(const char* sym_json, const char* mode,
                                   coopifc_channel** out, char** err);

int coopifc_channel_to_json(const coopifc_channel* ch, char** json_out,
                            char** err);

/* Maximizes each requested bound over the input covariance and reports the
 * sum-rate headline (minimum over all valid sum-rate combinations).
 * `bounds` is a comma-separated list of bound names ("cut-r1a" .. "cut-r2c",
 * "cut-sum", "sum-rate-a", "sum-rate-b", "mimo-ultimate") or NULL/"all".
 * `optimizer_json` (optional) overrides restarts, max_iters, tol, seed,
 * noise_corr_entries. */
int coopifc_eval_bounds(const coopifc_channel* ch, const char* bounds,
                        const char* optimizer_json, char** json_out,
                        char** err);

/* Closed-form symmetric generalized-degrees-of-freedom value of one
 * cooperation mode at interference exponent alpha with cooperation strength
 * beta. *tight is 0 on regimes where the bound is not known to be tight. */
int coopifc_gdof_point(const char* mode, double alpha, double beta, double* d,
                       int* tight, char** err);

/* Sweep over the inclusive grid a0, a0+step, ..., a1. Emits CSV with header
 * alpha,mode,beta,d,two_d,tight. */
int coopifc_gdof_sweep(const char* mode, double beta, double a0, double a1,
                       double step, char** csv_out, char** err);

/* Re-renders sweep CSVs (one curve each) as a single static SVG. */
int coopifc_curves_to_svg(const char* const* csvs, int n, char** svg_out,
                          char** err);

/* Converts one sweep CSV to a JSON array of row objects. */
int coopifc_curve_csv_to_json(const char* csv, char** json_out, char** err);

/* Generates the chained mutual-information terms bounding the partial sum
 * rate of users `subset` (ordered, 1-based) on a K-pair network; one term
 * per line. condition_on_dest_inputs additionally conditions every term on
 * the destination inputs. */
int coopifc_ksum_terms(int K, const int* subset, int n,
                       int condition_on_dest_inputs, char** text_out,
                       char** err);

/* Evaluates the generated chain on a channel instance (input covariance:
 * the channel's fixed Q if present, else independent full-power inputs) and
 * reports in-band bits, out-of-band budget, total, and the chain-rule
 * consistency residual. */
int coopifc_ksum_eval(const coopifc_channel* ch, const int* subset, int n,
                      int condition_on_dest_inputs, char** json_out,
                      char** err);

#ifdef __cplusplus
}
#endif

#endif /* COOPIFC_H */
