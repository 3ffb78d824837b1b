#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xychain/types.hpp"

namespace xychain {

enum class Quantity { delta_e, ricci_ns, ricci_r, delta_ricci };
const char* quantity_name(Quantity q);

struct SizeSample {
  int length = 0;
  double value = 0;
  int sign = 0;        // 0 when below noise / invalid
  bool valid = false;  // participates in fits
  std::string flag;    // why invalid: "singular", "below-noise", ...
};

struct SizeSeries {
  Quantity quantity = Quantity::delta_e;
  double gamma = 0, h = 0;
  std::vector<SizeSample> samples;  // ascending L

  std::size_t valid_count() const;
};

// Evaluates the quantity at each L. Ricci quantities use the determinant
// form for the per-sector tags and the Christoffel difference for
// delta_ricci; gamma = 0 is evaluated at the XX-line limit gamma_eff = 1e-4.
// Values indistinguishable from roundoff are recorded as below-noise gaps.
SizeSeries build_series(Quantity quantity, double gamma, double h,
                        const std::vector<int>& lengths);

enum class FitModel { exponential, powerlaw, biexponential, erratic };
enum class BranchRule { none, mod4, mod2 };
const char* fit_model_name(FitModel m);

struct FitResult {
  FitModel model = FitModel::erratic;
  double exponent = 0;    // beta or alpha of the winning single fit
  double prefactor = 0;
  double r_squared = 0;
  // biexponential branches: upper = slower decay
  double beta_upper = 0, beta_lower = 0;
  double r2_upper = 0, r2_lower = 0;
  double prefactor_upper = 0, prefactor_lower = 0;
  bool sign_pattern_ok = false;
  BranchRule branch_rule = BranchRule::none;
  int window_min = 0, window_max = 0;
  std::size_t n_used = 0;
  bool zero_series = false;
};

// Least squares of ln|v| on L over the window; beta = -slope.
FitResult fit_exponential(const SizeSeries& series, int window_min,
                          int window_max);

// Least squares of ln|v| on ln L; alpha = -slope.
FitResult fit_powerlaw(const SizeSeries& series, int window_min,
                       int window_max);

struct DecayThresholds {
  double erratic_r2 = 0.9;  // both single fits below this: erratic
  double branch_r2 = 0.95;  // both branch fits above this: biexponential
};

// Fits both models over the upper half of the valid samples and keeps the
// higher R^2; a series whose single fits fail but whose even/odd branches fit
// cleanly is biexponential; an all-below-noise series is erratic with the
// zero-series flag.
FitResult classify_decay(const SizeSeries& series,
                         const DecayThresholds& thresholds = {});

// Branch split per the h = 0 rules: mod4 groups L%4 in {0,2} vs {1,3}; mod2
// groups even vs odd. The upper branch is the slower decay. Sign patterns:
// mod4 upper alternates as (-1)^(L/2+1) (checked over the asymptotic half),
// mod2 upper is sign-constant per sector.
FitResult fit_biexponential(const SizeSeries& series, BranchRule rule,
                            double min_branch_r2 = 0.95);

// Closed-form sector gap at h = 1: s * pi gamma / (12 L) for order 1, plus
// -61 pi^3 (4 gamma^2 - 3) / (720 gamma L^3) at order 3. The global sign
// s = -1 is pinned by direct evaluation of the exact gap.
double em_delta_gs(double gamma, int length, int order);

// Euler-Maclaurin approximation of delta E: -1/2 [ (I_NS - I_R) + boundary
// terms + Bernoulli corrections with odd k-derivatives up to 2*n_terms - 1 ].
double em_general(const ChainParams& params, int n_terms);

struct ExponentCell {
  double gamma = 0, h = 0;
  std::optional<FitResult> fit;
  std::string error;
};

// classify_decay over a list of (gamma, h) points.
std::vector<ExponentCell> exponent_map(
    const std::vector<std::pair<double, double>>& points, Quantity quantity,
    const std::vector<int>& lengths);

}  // namespace xychain
