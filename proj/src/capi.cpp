#include "xychain.h"

#include <cstring>
#include <new>
#include <string>

#include "xychain/chain.hpp"
#include "xychain/exact.hpp"
#include "xychain/geometry.hpp"
#include "xychain/io.hpp"
#include "xychain/scaling.hpp"
#include "xychain/scan.hpp"
#include "xychain/spectrum.hpp"

using namespace xychain;

namespace {

thread_local std::string g_last_error;

xyc_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return XYC_ERR_INVALID;
    case ErrorCode::index_error: return XYC_ERR_INDEX;
    case ErrorCode::domain_error: return XYC_ERR_DOMAIN;
    case ErrorCode::odd_length_negative_coupling:
      return XYC_ERR_ODD_NEGATIVE_COUPLING;
    case ErrorCode::gapless_mode: return XYC_ERR_GAPLESS;
    case ErrorCode::capacity_error: return XYC_ERR_CAPACITY;
    case ErrorCode::no_convergence: return XYC_ERR_NO_CONVERGENCE;
    case ErrorCode::unclassifiable: return XYC_ERR_UNCLASSIFIABLE;
    case ErrorCode::singular_point: return XYC_ERR_SINGULAR;
    case ErrorCode::stencil_crosses_singular: return XYC_ERR_STENCIL;
    case ErrorCode::degenerate_metric: return XYC_ERR_DEGENERATE_METRIC;
    case ErrorCode::insufficient_data: return XYC_ERR_INSUFFICIENT_DATA;
    case ErrorCode::branch_misfit: return XYC_ERR_BRANCH_MISFIT;
    case ErrorCode::io_error: return XYC_ERR_IO;
  }
  return XYC_ERR_INTERNAL;
}

template <typename F>
xyc_status guarded(F&& f) {
  try {
    f();
    return XYC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return XYC_ERR_CAPACITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return XYC_ERR_INTERNAL;
  }
}

ChainParams to_params(const xyc_params* p) {
  if (!p) fail(ErrorCode::invalid_argument, "null params");
  return ChainParams{p->length, p->coupling, p->anisotropy, p->field};
}

Sector to_sector(xyc_sector s) {
  return s == XYC_SECTOR_NS ? Sector::ns : Sector::r;
}

Grid to_grid(const xyc_grid_spec* g) {
  if (!g) fail(ErrorCode::invalid_argument, "null grid spec");
  return Grid(g->gamma_min, g->gamma_max, g->n_gamma, g->h_min, g->h_max,
              g->n_h);
}

template <typename T>
void require(T* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string("null ") + what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct xyc_spectrum {
  SingleParticleSpectrum data;
};
struct xyc_series {
  SizeSeries data;
};
struct xyc_casemap {
  CaseMap data;
};
struct xyc_signmap {
  SignMap data;
};

extern "C" {

const char* xyc_last_error(void) { return g_last_error.c_str(); }

const char* xyc_status_name(xyc_status status) {
  switch (status) {
    case XYC_OK: return "ok";
    case XYC_ERR_INVALID: return "invalid-argument";
    case XYC_ERR_INDEX: return "index-error";
    case XYC_ERR_DOMAIN: return "domain-error";
    case XYC_ERR_ODD_NEGATIVE_COUPLING: return "odd-length-negative-coupling";
    case XYC_ERR_GAPLESS: return "gapless-mode";
    case XYC_ERR_CAPACITY: return "capacity-error";
    case XYC_ERR_NO_CONVERGENCE: return "no-convergence";
    case XYC_ERR_UNCLASSIFIABLE: return "unclassifiable";
    case XYC_ERR_SINGULAR: return "singular-point";
    case XYC_ERR_STENCIL: return "stencil-crosses-singular";
    case XYC_ERR_DEGENERATE_METRIC: return "degenerate-metric";
    case XYC_ERR_INSUFFICIENT_DATA: return "insufficient-data";
    case XYC_ERR_BRANCH_MISFIT: return "branch-misfit";
    case XYC_ERR_IO: return "io-error";
    case XYC_ERR_INTERNAL: return "internal-error";
  }
  return "?";
}

xyc_status xyc_classify_region(double gamma, double h, double tol,
                               int32_t* out_region) {
  return guarded([&] {
    require(out_region, "out_region");
    *out_region = static_cast<int32_t>(classify_region(gamma, h, tol).label);
  });
}

const char* xyc_region_name(int32_t region) {
  if (region < 0 || region > static_cast<int32_t>(RegionLabel::point_ci))
    return "?";
  return region_name(static_cast<RegionLabel>(region));
}

xyc_status xyc_canonicalize(const xyc_params* in, xyc_params* out) {
  return guarded([&] {
    require(out, "out");
    ChainParams c = canonicalize(to_params(in));
    *out = {c.length, c.coupling, c.anisotropy, c.field};
  });
}

xyc_status xyc_ptl_degeneracy_angle(double gamma, double* out_chi) {
  return guarded([&] {
    require(out_chi, "out_chi");
    *out_chi = ptl_degeneracy_angle(gamma);
  });
}

xyc_status xyc_spectrum_compute(const xyc_params* params, xyc_sector sector,
                                xyc_spectrum** out) {
  return guarded([&] {
    require(out, "out");
    *out = new xyc_spectrum{
        single_particle_spectrum(to_params(params), to_sector(sector))};
  });
}

void xyc_spectrum_free(xyc_spectrum* s) { delete s; }

int32_t xyc_spectrum_length(const xyc_spectrum* s) {
  return s ? static_cast<int32_t>(s->data.phase.size()) : 0;
}

xyc_status xyc_spectrum_row(const xyc_spectrum* s, int32_t k, double* phi,
                            double* epsilon, double* theta) {
  return guarded([&] {
    require(s, "spectrum");
    if (k < 1 || k > static_cast<int32_t>(s->data.phase.size()))
      fail(ErrorCode::index_error, "mode index out of range");
    if (phi) *phi = s->data.phase[k - 1];
    if (epsilon) *epsilon = s->data.energy[k - 1];
    if (theta) *theta = s->data.angle[k - 1];
  });
}

xyc_status xyc_spectrum_write(const xyc_spectrum* s, const char* path,
                              int as_json) {
  return guarded([&] {
    require(s, "spectrum");
    require(path, "path");
    atomic_write(path, as_json ? spectrum_json(s->data) : spectrum_csv(s->data));
  });
}

xyc_status xyc_ground_energy(const xyc_params* params, xyc_sector sector,
                             double* out) {
  return guarded([&] {
    require(out, "out");
    *out = sector_ground_energy(to_params(params), to_sector(sector));
  });
}

xyc_status xyc_first_excited(const xyc_params* params, xyc_sector sector,
                             double* out) {
  return guarded([&] {
    require(out, "out");
    *out = sector_first_excited(to_params(params), to_sector(sector));
  });
}

xyc_status xyc_delta_gs(const xyc_params* params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = delta_gs(to_params(params));
  });
}

xyc_status xyc_oracle_report(const xyc_params* params, double tol,
                             char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    ChainParams p = to_params(params);
    RuleSelection rule = select_parity_rule(p, tol);
    SpinSpectrum spin = parity_resolved_spectrum(p);
    auto ns = enumerate_many_body(p, Sector::ns, ParityFilter::any,
                                  std::uint64_t{1} << p.length);
    auto r = enumerate_many_body(p, Sector::r, ParityFilter::any,
                                 std::uint64_t{1} << p.length);
    CaseResult c = classify_case(p, tol);
    *out_json = dup_string(match_report_json(
        p, rule, match_spectra(ns, spin, tol), match_spectra(r, spin, tol), c));
  });
}

xyc_status xyc_classify_case(const xyc_params* params, double tol,
                             int32_t* out_case) {
  return guarded([&] {
    require(out_case, "out_case");
    *out_case = static_cast<int32_t>(classify_case(to_params(params), tol).tag);
  });
}

void xyc_string_free(char* s) { delete[] s; }

xyc_status xyc_qgt(const xyc_params* params, xyc_sector sector,
                   xyc_qgt_point* out) {
  return guarded([&] {
    require(out, "out");
    QgtPoint q = qgt_components(to_params(params), to_sector(sector));
    *out = {q.q_hh, q.q_gg, q.q_hg, q.omega_hg, q.singular, q.singular_mode};
  });
}

xyc_status xyc_fidelity_susceptibility(const xyc_qgt_point* point, double v_h,
                                       double v_gamma, double* out) {
  return guarded([&] {
    require(point, "point");
    require(out, "out");
    QgtPoint q;
    q.q_hh = point->q_hh;
    q.q_gg = point->q_gg;
    q.q_hg = point->q_hg;
    *out = fidelity_susceptibility(q, v_h, v_gamma);
  });
}

xyc_status xyc_ricci(const xyc_params* params, xyc_sector sector,
                     xyc_ricci_result* out) {
  return guarded([&] {
    require(out, "out");
    RicciResult r = ricci_scalar(to_params(params), to_sector(sector));
    *out = {r.r_det, r.r_det_noise, r.r_christoffel, r.discrepancy,
            r.singular};
  });
}

xyc_status xyc_ricci_difference(const xyc_params* params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ricci_difference(to_params(params));
  });
}

xyc_status xyc_berry_phase_thermo(double gamma, double h, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = berry_phase_thermo(gamma, h);
  });
}

xyc_status xyc_ricci_thermo(double gamma, double h, int32_t length,
                            double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ricci_thermo(gamma, h, length);
  });
}

xyc_status xyc_series_build(xyc_quantity quantity, double gamma, double h,
                            const int32_t* lengths, size_t n,
                            xyc_series** out) {
  return guarded([&] {
    require(out, "out");
    require(lengths, "lengths");
    std::vector<int> ls(lengths, lengths + n);
    *out = new xyc_series{
        build_series(static_cast<Quantity>(quantity), gamma, h, ls)};
  });
}

void xyc_series_free(xyc_series* s) { delete s; }

size_t xyc_series_size(const xyc_series* s) {
  return s ? s->data.samples.size() : 0;
}

xyc_status xyc_series_sample(const xyc_series* s, size_t i, int32_t* length,
                             double* value, int32_t* sign, int32_t* valid) {
  return guarded([&] {
    require(s, "series");
    if (i >= s->data.samples.size())
      fail(ErrorCode::index_error, "sample index out of range");
    const SizeSample& p = s->data.samples[i];
    if (length) *length = p.length;
    if (value) *value = p.value;
    if (sign) *sign = p.sign;
    if (valid) *valid = p.valid;
  });
}

xyc_status xyc_series_write(const xyc_series* s, const char* path,
                            int as_json) {
  return guarded([&] {
    require(s, "series");
    require(path, "path");
    atomic_write(path, as_json ? series_json(s->data) : series_csv(s->data));
  });
}

xyc_status xyc_fit(const xyc_series* s, int32_t model, int32_t branch_rule,
                   char** out_json) {
  return guarded([&] {
    require(s, "series");
    require(out_json, "out_json");
    const SizeSeries& series = s->data;
    int lo = series.samples.empty() ? 0 : series.samples.front().length;
    int hi = series.samples.empty() ? 0 : series.samples.back().length;
    FitResult fit;
    switch (model) {
      case 0: fit = classify_decay(series); break;
      case 1: fit = fit_exponential(series, lo, hi); break;
      case 2: fit = fit_powerlaw(series, lo, hi); break;
      case 3:
        if (branch_rule != 1 && branch_rule != 2)
          fail(ErrorCode::invalid_argument,
               "biexponential fit needs branch_rule mod4 (1) or mod2 (2)");
        fit = fit_biexponential(
            series, branch_rule == 1 ? BranchRule::mod4 : BranchRule::mod2);
        break;
      default:
        fail(ErrorCode::invalid_argument, "unknown fit model");
    }
    *out_json = dup_string(fit_json(series, fit));
  });
}

xyc_status xyc_em_delta_gs(double gamma, int32_t length, int32_t order,
                           double* out) {
  return guarded([&] {
    require(out, "out");
    *out = em_delta_gs(gamma, length, order);
  });
}

xyc_status xyc_em_general(const xyc_params* params, int32_t n_terms,
                          double* out) {
  return guarded([&] {
    require(out, "out");
    *out = em_general(to_params(params), n_terms);
  });
}

xyc_status xyc_scan_cases(const xyc_grid_spec* grid, int32_t length,
                          int32_t threads, xyc_casemap** out) {
  return guarded([&] {
    require(out, "out");
    *out = new xyc_casemap{scan_cases(to_grid(grid), length, threads)};
  });
}

void xyc_casemap_free(xyc_casemap* m) { delete m; }

xyc_status xyc_casemap_cell(const xyc_casemap* m, int32_t i, int32_t j,
                            double* gamma, double* h, int32_t* case_tag) {
  return guarded([&] {
    require(m, "casemap");
    if (i < 0 || i >= m->data.grid.n_gamma || j < 0 || j >= m->data.grid.n_h)
      fail(ErrorCode::index_error, "cell index out of range");
    if (gamma) *gamma = m->data.grid.gamma_at(i);
    if (h) *h = m->data.grid.h_at(j);
    if (case_tag) *case_tag = m->data.cases[m->data.grid.index(i, j)];
  });
}

xyc_status xyc_casemap_write(const xyc_casemap* m, const char* path,
                             int as_json) {
  return guarded([&] {
    require(m, "casemap");
    require(path, "path");
    atomic_write(path, as_json ? cases_json(m->data) : cases_csv(m->data));
  });
}

xyc_status xyc_casemap_arcs(const xyc_casemap* m, const char* path,
                            int32_t* out_count) {
  return guarded([&] {
    require(m, "casemap");
    auto curves = extract_case_boundaries(m->data);
    ArcSet arcs = fit_arcs(curves, m->data.length);
    if (path) atomic_write(path, arcs_csv(arcs));
    if (out_count) *out_count = arcs.accepted;
  });
}

xyc_status xyc_scan_sign(const xyc_grid_spec* grid, int32_t length,
                         xyc_map_quantity quantity, double clamp,
                         int32_t threads, xyc_signmap** out) {
  return guarded([&] {
    require(out, "out");
    *out = new xyc_signmap{scan_sign(to_grid(grid), length,
                                     static_cast<MapQuantity>(quantity), clamp,
                                     threads)};
  });
}

void xyc_signmap_free(xyc_signmap* m) { delete m; }

xyc_status xyc_signmap_cell(const xyc_signmap* m, int32_t i, int32_t j,
                            double* raw, double* clamped, int32_t* sign,
                            int32_t* singular) {
  return guarded([&] {
    require(m, "signmap");
    if (i < 0 || i >= m->data.grid.n_gamma || j < 0 || j >= m->data.grid.n_h)
      fail(ErrorCode::index_error, "cell index out of range");
    std::size_t idx = m->data.grid.index(i, j);
    if (raw) *raw = m->data.raw[idx];
    if (clamped) *clamped = m->data.clamped[idx];
    if (sign) *sign = m->data.sign[idx];
    if (singular) *singular = m->data.singular[idx];
  });
}

xyc_status xyc_signmap_write(const xyc_signmap* m, const char* path,
                             int as_json) {
  return guarded([&] {
    require(m, "signmap");
    require(path, "path");
    atomic_write(path, as_json ? signmap_json(m->data) : signmap_csv(m->data));
  });
}

xyc_status xyc_signmap_write_svg(const xyc_signmap* m, const char* path) {
  return guarded([&] {
    require(m, "signmap");
    require(path, "path");
    atomic_write(path, signmap_svg(m->data));
  });
}

xyc_status xyc_signmap_zero_curves(const xyc_signmap* m, const char* path,
                                   int32_t* out_count) {
  return guarded([&] {
    require(m, "signmap");
    auto curves = extract_zero_curves(m->data);
    if (path) atomic_write(path, curves_csv(curves));
    if (out_count) *out_count = static_cast<int32_t>(curves.size());
  });
}

xyc_status xyc_sign_sequence(double gamma, double h, const int32_t* lengths,
                             size_t n, int32_t* signs, int32_t* change_count) {
  return guarded([&] {
    require(lengths, "lengths");
    std::vector<int> ls(lengths, lengths + n);
    SignSequence seq = sign_sequence_scan(gamma, h, ls);
    if (signs)
      for (std::size_t i = 0; i < seq.signs.size(); ++i)
        signs[i] = seq.signs[i];
    if (change_count) *change_count = seq.change_count;
  });
}

}  // extern "C"
