#include "xychain/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "xychain/chain.hpp"
#include "xychain/spectrum.hpp"
#include "xychain/util.hpp"

namespace xychain {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kActiveSin = 1e-12;   // |sin phi| below this: mode inactive
constexpr double kGapless = 1e-12;     // active-mode epsilon below this: singular
constexpr double kCrossU = 1e-9;       // |h - cos phi| window of a level crossing
constexpr double kCrossV = 1e-3;       // |gamma sin phi| window of a level crossing
constexpr double kFdFirst = 1e-5;      // first-derivative FD step factor
constexpr double kFdSecond = 1e-3;     // second-derivative FD step factor
constexpr double kDetFloor = 1e-30;

double param_scale(const ChainParams& p) {
  return std::max({1.0, std::abs(p.anisotropy), std::abs(p.field)});
}

// All metric components and their first derivatives in one pass, with
// absolute-value sums for roundoff estimates and singularity flags.
struct QgtSums {
  double E = 0, F = 0, G = 0;
  double E1 = 0, E2 = 0, F1 = 0, F2 = 0, G1 = 0, G2 = 0;
  double sE = 0, sF = 0, sG = 0;
  double sE1 = 0, sE2 = 0, sF1 = 0, sF2 = 0, sG1 = 0, sG2 = 0;
  bool singular = false;
  int singular_mode = 0;
};

QgtSums qgt_sums(const ChainParams& p, Sector sector) {
  QgtSums out;
  double g = p.anisotropy, h = p.field, J = p.coupling;
  KahanSum E, F, G, E1, E2, F1, F2, G1, G2;
  for (int k = 1; k <= p.length; ++k) {
    double phi = mode_phase(k, p, sector);
    double s = std::sin(phi);
    if (std::abs(s) < kActiveSin) continue;  // theta constant: no response
    double c = std::cos(phi);
    double u = h - J * c;
    double v = g * J * s;
    double D = u * u + v * v;
    if (std::sqrt(D) < kGapless ||
        (std::abs(u) < kCrossU * std::max(1.0, std::abs(h)) &&
         std::abs(v) < kCrossV)) {
      if (!out.singular) out.singular_mode = k;
      out.singular = true;
      continue;
    }
    double A = -g * J * s / D;        // d theta / dh
    double B = J * s * u / D;         // d theta / dgamma
    double dAdh = 2 * g * J * s * u / (D * D);
    double dAdg = -J * s * (u * u - v * v) / (D * D);
    double dBdh = J * s * (v * v - u * u) / (D * D);
    double dBdg = -2 * g * J * J * J * s * s * s * u / (D * D);
    E.add(0.25 * A * A);
    G.add(0.25 * B * B);
    F.add(0.25 * A * B);
    E1.add(0.5 * A * dAdh);
    E2.add(0.5 * A * dAdg);
    G1.add(0.5 * B * dBdh);
    G2.add(0.5 * B * dBdg);
    F1.add(0.25 * (dAdh * B + A * dBdh));
    F2.add(0.25 * (dAdg * B + A * dBdg));
  }
  out.E = E.value(); out.sE = E.abs_scale();
  out.F = F.value(); out.sF = F.abs_scale();
  out.G = G.value(); out.sG = G.abs_scale();
  out.E1 = E1.value(); out.sE1 = E1.abs_scale();
  out.E2 = E2.value(); out.sE2 = E2.abs_scale();
  out.F1 = F1.value(); out.sF1 = F1.abs_scale();
  out.F2 = F2.value(); out.sF2 = F2.abs_scale();
  out.G1 = G1.value(); out.sG1 = G1.abs_scale();
  out.G2 = G2.value(); out.sG2 = G2.abs_scale();
  return out;
}

}  // namespace

QgtPoint qgt_components(const ChainParams& params, Sector sector) {
  params.validate();
  QgtSums s = qgt_sums(params, sector);
  QgtPoint out;
  out.params = params;
  out.sector = sector;
  out.q_hh = s.E;
  out.q_gg = s.G;
  out.q_hg = s.F;
  out.omega_hg = 0.0;
  out.singular = s.singular;
  out.singular_mode = s.singular_mode;
  return out;
}

double fidelity_susceptibility(const QgtPoint& point, double v_h, double v_g) {
  if (v_h == 0 && v_g == 0)
    fail(ErrorCode::invalid_argument, "direction must be nonzero");
  return point.q_hh * v_h * v_h + 2 * point.q_hg * v_h * v_g +
         point.q_gg * v_g * v_g;
}

MetricDerivs metric_derivatives(const ChainParams& params, Sector sector,
                                DerivScheme scheme) {
  params.validate();
  MetricDerivs out;
  out.scheme = scheme;
  if (scheme == DerivScheme::analytic) {
    QgtSums s = qgt_sums(params, sector);
    if (s.singular)
      fail(ErrorCode::singular_point, "metric derivatives at a singular point");
    out.dghh_dh = s.E1;
    out.dghh_dg = s.E2;
    out.dggg_dh = s.G1;
    out.dggg_dg = s.G2;
    out.dghg_dh = s.F1;
    out.dghg_dg = s.F2;
    return out;
  }
  double step = kFdFirst * param_scale(params);
  auto at = [&](double dg, double dh) {
    ChainParams q = params;
    q.anisotropy += dg;
    q.field += dh;
    QgtPoint pt = qgt_components(q, sector);
    if (pt.singular)
      fail(ErrorCode::stencil_crosses_singular,
           "finite-difference stencil hits a singular point");
    return pt;
  };
  QgtPoint hp = at(0, step), hm = at(0, -step);
  QgtPoint gp = at(step, 0), gm = at(-step, 0);
  out.dghh_dh = (hp.q_hh - hm.q_hh) / (2 * step);
  out.dggg_dh = (hp.q_gg - hm.q_gg) / (2 * step);
  out.dghg_dh = (hp.q_hg - hm.q_hg) / (2 * step);
  out.dghh_dg = (gp.q_hh - gm.q_hh) / (2 * step);
  out.dggg_dg = (gp.q_gg - gm.q_gg) / (2 * step);
  out.dghg_dg = (gp.q_hg - gm.q_hg) / (2 * step);
  return out;
}

double gaussian_curvature(const MetricBundle& m) {
  double det = m.E * m.G - m.F * m.F;
  double m1[3][3] = {
      {-0.5 * m.E22 + m.F12 - 0.5 * m.G11, 0.5 * m.E1, m.F1 - 0.5 * m.E2},
      {m.F2 - 0.5 * m.G1, m.E, m.F},
      {0.5 * m.G2, m.F, m.G}};
  double m2[3][3] = {{0.0, 0.5 * m.E2, 0.5 * m.G1},
                     {0.5 * m.E2, m.E, m.F},
                     {0.5 * m.G1, m.F, m.G}};
  auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  return (det3(m1) - det3(m2)) / (det * det);
}

double curvature_determinant_form(const MetricBundle& m) {
  double det = m.E * m.G - m.F * m.F;
  double d = m.E * (m.F1 * m.G2 - m.G1 * m.F2) -
             m.F * (m.E1 * m.G2 - m.G1 * m.E2) +
             m.G * (m.E1 * m.F2 - m.F1 * m.E2);
  return -0.5 * d / (det * det);
}

RicciResult ricci_scalar(const ChainParams& params, Sector sector) {
  params.validate();
  RicciResult out;
  QgtSums s = qgt_sums(params, sector);
  if (s.singular) {
    out.singular = true;
    out.reason = SingularReason::gapless_mode;
    return out;
  }
  double det = s.E * s.G - s.F * s.F;
  double det_err = kEps * (s.sE * std::abs(s.G) + std::abs(s.E) * s.sG +
                           2 * std::abs(s.F) * s.sF);
  if (det < kDetFloor || det < 8 * det_err) {
    out.singular = true;
    out.reason = SingularReason::degenerate_metric;
    return out;
  }

  // Determinant form: cofactor expansion with forward roundoff estimate.
  {
    double c0 = s.F1 * s.G2 - s.G1 * s.F2;
    double c1 = s.E1 * s.G2 - s.G1 * s.E2;
    double c2 = s.E1 * s.F2 - s.F1 * s.E2;
    double d = s.E * c0 - s.F * c1 + s.G * c2;
    double err =
        kEps * (s.sE * std::abs(c0) + s.sF * std::abs(c1) + s.sG * std::abs(c2) +
                s.sE1 * std::abs(s.F * s.G2) + s.sE1 * std::abs(s.G * s.F2) +
                s.sF1 * std::abs(s.E * s.G2) + s.sF1 * std::abs(s.G * s.E2) +
                s.sG1 * std::abs(s.E * s.F2) + s.sG1 * std::abs(s.F * s.E2) +
                s.sE2 * std::abs(s.F * s.G1) + s.sE2 * std::abs(s.G * s.F1) +
                s.sF2 * std::abs(s.E * s.G1) + s.sF2 * std::abs(s.G * s.E1) +
                s.sG2 * std::abs(s.E * s.F1) + s.sG2 * std::abs(s.F * s.E1) +
                std::abs(s.E * c0) + std::abs(s.F * c1) + std::abs(s.G * c2));
    out.r_det = -0.5 * d / (det * det);
    out.r_det_noise = 0.5 * err / (det * det);
  }

  // Brioschi: second derivatives by central differences of the analytic
  // first derivatives.
  double step = kFdSecond * param_scale(params);
  auto sums_at = [&](double dg, double dh) {
    ChainParams q = params;
    q.anisotropy += dg;
    q.field += dh;
    QgtSums r = qgt_sums(q, sector);
    if (r.singular)
      fail(ErrorCode::stencil_crosses_singular,
           "curvature stencil hits a singular point");
    return r;
  };
  try {
    QgtSums gp = sums_at(step, 0), gm = sums_at(-step, 0);
    QgtSums hp = sums_at(0, step), hm = sums_at(0, -step);
    MetricBundle m;
    m.E = s.E; m.F = s.F; m.G = s.G;
    m.E1 = s.E1; m.E2 = s.E2;
    m.F1 = s.F1; m.F2 = s.F2;
    m.G1 = s.G1; m.G2 = s.G2;
    m.E22 = (gp.E2 - gm.E2) / (2 * step);
    m.G11 = (hp.G1 - hm.G1) / (2 * step);
    m.F12 = 0.5 * ((gp.F1 - gm.F1) / (2 * step) + (hp.F2 - hm.F2) / (2 * step));
    out.r_christoffel = gaussian_curvature(m);
  } catch (const Error&) {
    out.singular = true;
    out.reason = SingularReason::stencil;
    return out;
  }
  out.discrepancy = std::abs(out.r_det - out.r_christoffel);
  return out;
}

double ricci_difference(const ChainParams& params) {
  RicciResult r = ricci_scalar(params, Sector::r);
  RicciResult ns = ricci_scalar(params, Sector::ns);
  if (r.singular || ns.singular)
    fail(ErrorCode::singular_point, "ricci_difference at a singular point");
  return r.r_christoffel - ns.r_christoffel;
}

double berry_phase_thermo(double gamma, double h) {
  // Branch on the area inequality itself: the closed form lives on the open
  // disk gamma^2 + h^2 < 1 and is 0 elsewhere.
  if (gamma * gamma + h * h >= 1.0) return 0.0;
  double g2 = gamma * gamma;
  double radicand = (1 - g2) * (1 - g2 - h * h);
  if (radicand <= 0)
    fail(ErrorCode::domain_error,
         "Berry phase branch undefined: nonpositive radicand inside the disk");
  return -std::numbers::pi +
         std::numbers::pi * h * gamma / std::sqrt(radicand);
}

double ricci_thermo(double gamma, double h, int length) {
  if (length < 1) fail(ErrorCode::invalid_argument, "length must be positive");
  double g = std::abs(gamma), hh = std::abs(h);
  // The piecewise form is defined on the areas; |h| = 1 and the gamma = 0
  // segment below it are outside both branches.
  if (hh < 1.0) {
    if (g == 0) fail(ErrorCode::domain_error, "branch requires gamma != 0");
    return -(4.0 / length) * (1 + g) / g;
  }
  if (hh > 1.0) {
    double rad = std::sqrt(hh * hh + g * g - 1);
    return (4.0 / length) * (hh + rad) / rad;
  }
  fail(ErrorCode::domain_error, "ricci_thermo is undefined on |h| = 1");
}

}  // namespace xychain
