#ifndef WCOSPEC_H
#define WCOSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Return codes. The first four match the CLI exit codes.
typedef enum WcoStatus {
  WCO_STATUS_OK = 0,
  WCO_STATUS_INTERNAL = 1,
  // Configuration outside the supported case analysis.
  WCO_STATUS_UNSUPPORTED = 2,
  // Malformed spec or invalid input values.
  WCO_STATUS_SCHEMA = 3,
  WCO_STATUS_NULL_ARGUMENT = 4,
  WCO_STATUS_INVALID_UTF8 = 5,
  WCO_STATUS_PANIC = 6,
} WcoStatus;

typedef enum WcoMembership {
  WCO_MEMBERSHIP_OUT = 0,
  WCO_MEMBERSHIP_IN = 1,
  WCO_MEMBERSHIP_UNKNOWN = 2,
} WcoMembership;

// Opaque analysis result.
typedef struct WcoReport WcoReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Analyze the operator described by `spec_json`. On success `*out` holds
// a new handle; on failure it is set to NULL and `wco_last_error` explains.
enum WcoStatus wco_analyze(const char *spec_json, struct WcoReport **out);

// As `wco_analyze`, then run the independent checks.
enum WcoStatus wco_verify(const char *spec_json, struct WcoReport **out);

// Pretty JSON of the full report document. NULL for a NULL handle.
const char *wco_report_json(const struct WcoReport *report);

const char *wco_report_case_tag(const struct WcoReport *report);

enum WcoStatus wco_report_radii(const struct WcoReport *report, double *rho, double *rho_min);

// 1 if any check or cited comparison carries a FLAG verdict, 0 if none,
// -1 for a NULL handle.
int wco_report_flagged(const struct WcoReport *report);

// Membership of `re + i·im` in the named spectrum (`"sigma"`,
// `"sigma_ap"`, `"sigma_usf"`, `"sigma_lsf"`, `"sigma_sf"`, `"sigma_f"`,
// `"sigma_w"`).
enum WcoStatus wco_report_membership(const struct WcoReport *report,
                                     const char *spectrum,
                                     double re,
                                     double im,
                                     double tol,
                                     enum WcoMembership *out);

// Render all seven spectra as SVG into a caller-owned string. A window
// with `x_min >= x_max` is replaced by one fitted to the report.
enum WcoStatus wco_report_svg(const struct WcoReport *report,
                              double x_min,
                              double x_max,
                              double y_min,
                              double y_max,
                              size_t resolution,
                              char **out);

// One-line description of the spec's map, caller-owned.
enum WcoStatus wco_classify_map(const char *spec_json, char **out);

void wco_report_free(struct WcoReport *report);

void wco_string_free(char *s);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *wco_last_error(void);

const char *wco_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WCOSPEC_H */
