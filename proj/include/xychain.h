/* C interface to the xychain library: finite XY-chain sector spectra,
 * exact-diagonalization cross-checks, quantum-geometry fields, finite-size
 * fits and phase-space scans. All entry points return a status code; rich
 * results live behind opaque handles with accessor functions. */

#ifndef XYCHAIN_H
#define XYCHAIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define XYCHAIN_API __declspec(dllexport)
#else
#define XYCHAIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xyc_status {
  XYC_OK = 0,
  XYC_ERR_INVALID = 1,
  XYC_ERR_INDEX = 2,
  XYC_ERR_DOMAIN = 3,
  XYC_ERR_ODD_NEGATIVE_COUPLING = 4,
  XYC_ERR_GAPLESS = 5,
  XYC_ERR_CAPACITY = 6,
  XYC_ERR_NO_CONVERGENCE = 7,
  XYC_ERR_UNCLASSIFIABLE = 8,
  XYC_ERR_SINGULAR = 9,
  XYC_ERR_STENCIL = 10,
  XYC_ERR_DEGENERATE_METRIC = 11,
  XYC_ERR_INSUFFICIENT_DATA = 12,
  XYC_ERR_BRANCH_MISFIT = 13,
  XYC_ERR_IO = 14,
  XYC_ERR_INTERNAL = 15
} xyc_status;

typedef enum xyc_sector { XYC_SECTOR_NS = 0, XYC_SECTOR_R = 1 } xyc_sector;

/* Series quantities (fits) and map quantities (sign scans). */
typedef enum xyc_quantity {
  XYC_QUANTITY_DELTA_E = 0,
  XYC_QUANTITY_RICCI_NS = 1,
  XYC_QUANTITY_RICCI_R = 2,
  XYC_QUANTITY_DELTA_RICCI = 3
} xyc_quantity;

typedef enum xyc_map_quantity {
  XYC_MAP_RICCI_R = 0,
  XYC_MAP_RICCI_NS = 1,
  XYC_MAP_RICCI_PRODUCT = 2,
  XYC_MAP_DELTA_RICCI = 3,
  XYC_MAP_DELTA_E = 4
} xyc_map_quantity;

typedef struct xyc_params {
  int32_t length;
  double coupling;
  double anisotropy;
  double field;
} xyc_params;

typedef struct xyc_grid_spec {
  double gamma_min, gamma_max;
  double h_min, h_max;
  int32_t n_gamma, n_h;
} xyc_grid_spec;

/* Thread-local message for the last failing call in this thread. */
XYCHAIN_API const char* xyc_last_error(void);
XYCHAIN_API const char* xyc_status_name(xyc_status status);

/* ---- chain-core ---- */

XYCHAIN_API xyc_status xyc_classify_region(double gamma, double h, double tol,
                                           int32_t* out_region);
XYCHAIN_API const char* xyc_region_name(int32_t region);
XYCHAIN_API xyc_status xyc_canonicalize(const xyc_params* in, xyc_params* out);
XYCHAIN_API xyc_status xyc_ptl_degeneracy_angle(double gamma, double* out_chi);

/* ---- fermion-spectrum ---- */

typedef struct xyc_spectrum xyc_spectrum;
XYCHAIN_API xyc_status xyc_spectrum_compute(const xyc_params* params,
                                            xyc_sector sector,
                                            xyc_spectrum** out);
XYCHAIN_API void xyc_spectrum_free(xyc_spectrum* s);
XYCHAIN_API int32_t xyc_spectrum_length(const xyc_spectrum* s);
XYCHAIN_API xyc_status xyc_spectrum_row(const xyc_spectrum* s, int32_t k,
                                        double* phi, double* epsilon,
                                        double* theta);
XYCHAIN_API xyc_status xyc_spectrum_write(const xyc_spectrum* s,
                                          const char* path, int as_json);

XYCHAIN_API xyc_status xyc_ground_energy(const xyc_params* params,
                                         xyc_sector sector, double* out);
XYCHAIN_API xyc_status xyc_first_excited(const xyc_params* params,
                                         xyc_sector sector, double* out);
XYCHAIN_API xyc_status xyc_delta_gs(const xyc_params* params, double* out);

/* ---- exact-diag (oracle) ---- */

/* JSON report: parity-rule selection, per-sector match fractions against the
 * spin parity blocks, and the case label. Free with xyc_string_free. */
XYCHAIN_API xyc_status xyc_oracle_report(const xyc_params* params, double tol,
                                         char** out_json);
XYCHAIN_API xyc_status xyc_classify_case(const xyc_params* params, double tol,
                                         int32_t* out_case);
XYCHAIN_API void xyc_string_free(char* s);

/* ---- quantum-geometry ---- */

typedef struct xyc_qgt_point {
  double q_hh, q_gg, q_hg, omega_hg;
  int32_t singular;
  int32_t singular_mode;
} xyc_qgt_point;

typedef struct xyc_ricci_result {
  double r_det;
  double r_det_noise;
  double r_christoffel;
  double discrepancy;
  int32_t singular;
} xyc_ricci_result;

XYCHAIN_API xyc_status xyc_qgt(const xyc_params* params, xyc_sector sector,
                               xyc_qgt_point* out);
XYCHAIN_API xyc_status xyc_fidelity_susceptibility(const xyc_qgt_point* point,
                                                   double v_h, double v_gamma,
                                                   double* out);
XYCHAIN_API xyc_status xyc_ricci(const xyc_params* params, xyc_sector sector,
                                 xyc_ricci_result* out);
XYCHAIN_API xyc_status xyc_ricci_difference(const xyc_params* params,
                                            double* out);
XYCHAIN_API xyc_status xyc_berry_phase_thermo(double gamma, double h,
                                              double* out);
XYCHAIN_API xyc_status xyc_ricci_thermo(double gamma, double h, int32_t length,
                                        double* out);

/* ---- scaling-analysis ---- */

typedef struct xyc_series xyc_series;
XYCHAIN_API xyc_status xyc_series_build(xyc_quantity quantity, double gamma,
                                        double h, const int32_t* lengths,
                                        size_t n, xyc_series** out);
XYCHAIN_API void xyc_series_free(xyc_series* s);
XYCHAIN_API size_t xyc_series_size(const xyc_series* s);
XYCHAIN_API xyc_status xyc_series_sample(const xyc_series* s, size_t i,
                                         int32_t* length, double* value,
                                         int32_t* sign, int32_t* valid);
XYCHAIN_API xyc_status xyc_series_write(const xyc_series* s, const char* path,
                                        int as_json);

/* model: 0 auto (classify), 1 exponential, 2 powerlaw, 3 biexponential.
 * branch_rule: 0 none, 1 mod4, 2 mod2. JSON result; free with
 * xyc_string_free. */
XYCHAIN_API xyc_status xyc_fit(const xyc_series* s, int32_t model,
                               int32_t branch_rule, char** out_json);

XYCHAIN_API xyc_status xyc_em_delta_gs(double gamma, int32_t length,
                                       int32_t order, double* out);
XYCHAIN_API xyc_status xyc_em_general(const xyc_params* params,
                                      int32_t n_terms, double* out);

/* ---- phase-scan ---- */

typedef struct xyc_casemap xyc_casemap;
XYCHAIN_API xyc_status xyc_scan_cases(const xyc_grid_spec* grid, int32_t length,
                                      int32_t threads, xyc_casemap** out);
XYCHAIN_API void xyc_casemap_free(xyc_casemap* m);
XYCHAIN_API xyc_status xyc_casemap_cell(const xyc_casemap* m, int32_t i,
                                        int32_t j, double* gamma, double* h,
                                        int32_t* case_tag);
XYCHAIN_API xyc_status xyc_casemap_write(const xyc_casemap* m, const char* path,
                                         int as_json);
/* Arcs from the case-boundary curves; CSV columns index,h0,residual,n_points.
 * out_count receives the number of accepted arcs. */
XYCHAIN_API xyc_status xyc_casemap_arcs(const xyc_casemap* m, const char* path,
                                        int32_t* out_count);

typedef struct xyc_signmap xyc_signmap;
XYCHAIN_API xyc_status xyc_scan_sign(const xyc_grid_spec* grid, int32_t length,
                                     xyc_map_quantity quantity, double clamp,
                                     int32_t threads, xyc_signmap** out);
XYCHAIN_API void xyc_signmap_free(xyc_signmap* m);
XYCHAIN_API xyc_status xyc_signmap_cell(const xyc_signmap* m, int32_t i,
                                        int32_t j, double* raw, double* clamped,
                                        int32_t* sign, int32_t* singular);
XYCHAIN_API xyc_status xyc_signmap_write(const xyc_signmap* m, const char* path,
                                         int as_json);
XYCHAIN_API xyc_status xyc_signmap_write_svg(const xyc_signmap* m,
                                             const char* path);
/* Zero-crossing polylines (the white separators); CSV curve,gamma,h. */
XYCHAIN_API xyc_status xyc_signmap_zero_curves(const xyc_signmap* m,
                                               const char* path,
                                               int32_t* out_count);

/* Sign of delta E per length; signs buffer must hold n entries. */
XYCHAIN_API xyc_status xyc_sign_sequence(double gamma, double h,
                                         const int32_t* lengths, size_t n,
                                         int32_t* signs,
                                         int32_t* change_count);

#ifdef __cplusplus
}
#endif

#endif /* XYCHAIN_H */
