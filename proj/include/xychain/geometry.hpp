#pragma once

#include "xychain/types.hpp"

namespace xychain {

struct QgtPoint {
  ChainParams params;
  Sector sector = Sector::ns;
  double q_hh = 0, q_gg = 0, q_hg = 0;
  double omega_hg = 0;  // identically zero in this real-angle gauge
  bool singular = false;
  int singular_mode = 0;  // offending k when singular (1-based), else 0
};

// Metric components g_hh = 1/4 sum (d theta/dh)^2 etc., evaluated per mode in
// closed form. Modes with sin(phi_k) = 0 have theta locally constant in
// (gamma, h) and contribute zero; a point is singular when a geometrically
// active mode is gapless or sits on an exact level crossing.
QgtPoint qgt_components(const ChainParams& params, Sector sector);

// chi = sum_{mu nu} g_{mu nu} v_mu v_nu with v = (v_h, v_gamma).
double fidelity_susceptibility(const QgtPoint& point, double v_h, double v_g);

enum class DerivScheme { analytic, finite_difference };

struct MetricDerivs {
  double dghh_dh = 0, dghh_dg = 0;
  double dggg_dh = 0, dggg_dg = 0;
  double dghg_dh = 0, dghg_dg = 0;
  DerivScheme scheme = DerivScheme::analytic;
};

// First parameter derivatives of the metric: term-by-term closed forms, or
// central differences (step 1e-5 * max(1, |gamma|, |h|)) on qgt_components.
MetricDerivs metric_derivatives(const ChainParams& params, Sector sector,
                                DerivScheme scheme);

// Metric data at a point for the curvature formulas; used directly by tests
// with synthetic metrics. Coordinates: x1 = h, x2 = gamma;
// E = g_hh, F = g_hg, G = g_gg; suffix 1 = d/dh, 2 = d/dgamma.
struct MetricBundle {
  double E = 0, F = 0, G = 0;
  double E1 = 0, E2 = 0, F1 = 0, F2 = 0, G1 = 0, G2 = 0;
  double E22 = 0, F12 = 0, G11 = 0;  // second derivatives for Brioschi
};

// Gaussian curvature via the Brioschi formula.
double gaussian_curvature(const MetricBundle& m);

// The determinant expression for the curvature (first derivatives only):
// -1/2 det(g)^-2 det [[E, F, G], [E1, F1, G1], [E2, F2, G2]].
double curvature_determinant_form(const MetricBundle& m);

enum class SingularReason { none, gapless_mode, degenerate_metric, stencil };

struct RicciResult {
  double r_det = 0;        // determinant-form value
  double r_det_noise = 0;  // roundoff estimate of r_det
  double r_christoffel = 0;  // Gaussian curvature (Brioschi)
  double discrepancy = 0;
  bool singular = false;
  SingularReason reason = SingularReason::none;
};

// Both curvature routes at a point; analytic first derivatives everywhere,
// central differences of the analytic first derivatives for the three second
// derivatives Brioschi needs (step 1e-3 * scale). Singular when the metric is
// degenerate (det g < 1e-30), a geometrically active mode is gapless, or the
// finite-difference stencil crosses a level crossing.
RicciResult ricci_scalar(const ChainParams& params, Sector sector);

// R_R - R_NS from the Christoffel (Brioschi) values.
double ricci_difference(const ChainParams& params);

// Thermodynamic-limit ground-state Berry phase:
// -pi + pi h gamma / sqrt((1-gamma^2)(1-gamma^2-h^2)) inside Sigma1-, else 0.
double berry_phase_thermo(double gamma, double h);

// Piecewise large-L curvature: -(4/L)(1+|gamma|)/|gamma| on Sigma1- and
// Sigma2-, (4/L)(|h|+sqrt(h^2+gamma^2-1))/sqrt(h^2+gamma^2-1) on Sigma+.
double ricci_thermo(double gamma, double h, int length);

}  // namespace xychain
