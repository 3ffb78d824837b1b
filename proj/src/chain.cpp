#include "xychain/chain.hpp"

#include <cmath>

namespace xychain {

void ChainParams::validate() const {
  if (length < 2) fail(ErrorCode::invalid_argument, "chain length must be >= 2");
  if (!std::isfinite(coupling) || !std::isfinite(anisotropy) || !std::isfinite(field))
    fail(ErrorCode::invalid_argument, "parameters must be finite");
}

const char* region_name(RegionLabel label) {
  switch (label) {
    case RegionLabel::sigma1_minus: return "Sigma1Minus";
    case RegionLabel::sigma2_minus: return "Sigma2Minus";
    case RegionLabel::sigma_plus: return "SigmaPlus";
    case RegionLabel::line_ptl: return "LinePTL";
    case RegionLabel::line_cl_minus: return "LineCLMinus";
    case RegionLabel::line_cl_plus: return "LineCLPlus";
    case RegionLabel::line_trs_minus: return "LineTRSMinus";
    case RegionLabel::line_trs_plus: return "LineTRSPlus";
    case RegionLabel::line_xx_minus: return "LineXXMinus";
    case RegionLabel::line_xx_plus: return "LineXXPlus";
    case RegionLabel::point_xx: return "PointXX";
    case RegionLabel::line_ising: return "LineIsing";
    case RegionLabel::point_ci: return "PointCI";
  }
  return "?";
}

RegionInfo classify_region(double gamma, double h, double tol) {
  if (!(tol > 0)) fail(ErrorCode::invalid_argument, "tol must be positive");
  double g = std::abs(gamma);
  double hh = std::abs(h);
  RegionInfo info{RegionLabel::sigma1_minus, {}};

  bool on_ci = std::abs(g - 1) < tol && std::abs(hh - 1) < tol;
  // P_XX: gamma = 0, h = n/2 for integer n.
  bool on_pxx = g < tol && std::abs(hh - std::round(2 * hh) / 2) < tol;
  if (on_ci) info.memberships.push_back(RegionLabel::point_ci);
  if (on_pxx) info.memberships.push_back(RegionLabel::point_xx);

  double rad = std::hypot(g, hh);
  bool on_ptl = std::abs(rad - 1) < tol;
  bool on_cl_minus = std::abs(hh - 1) < tol && g < 1;
  bool on_cl_plus = std::abs(hh - 1) < tol && g > 1;
  bool on_trs_minus = hh < tol && g > 0 && g < 1;
  bool on_trs_plus = hh < tol && g > 1;
  bool on_xx_minus = g < tol && hh <= 1 + tol;
  bool on_xx_plus = g < tol && hh > 1 + tol;
  bool on_ising = std::abs(g - 1) < tol && std::abs(hh - 1) >= tol;
  if (on_ptl) info.memberships.push_back(RegionLabel::line_ptl);
  if (on_cl_minus) info.memberships.push_back(RegionLabel::line_cl_minus);
  if (on_cl_plus) info.memberships.push_back(RegionLabel::line_cl_plus);
  if (on_trs_minus) info.memberships.push_back(RegionLabel::line_trs_minus);
  if (on_trs_plus) info.memberships.push_back(RegionLabel::line_trs_plus);
  if (on_xx_minus) info.memberships.push_back(RegionLabel::line_xx_minus);
  if (on_xx_plus) info.memberships.push_back(RegionLabel::line_xx_plus);
  if (on_ising) info.memberships.push_back(RegionLabel::line_ising);

  if (!info.memberships.empty()) {
    info.label = info.memberships.front();
    return info;
  }
  if (rad < 1)
    info.label = RegionLabel::sigma1_minus;
  else if (hh < 1)
    info.label = RegionLabel::sigma2_minus;
  else
    info.label = RegionLabel::sigma_plus;
  return info;
}

ChainParams canonicalize(const ChainParams& params) {
  params.validate();
  ChainParams out = params;
  if (out.coupling < 0) {
    if (out.length % 2 != 0)
      fail(ErrorCode::odd_length_negative_coupling,
           "J < 0 cannot be absorbed on an odd chain");
    out.coupling = -out.coupling;
  }
  out.anisotropy = std::abs(out.anisotropy);
  out.field = std::abs(out.field);
  return out;
}

double ptl_degeneracy_angle(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    fail(ErrorCode::domain_error, "ptl_degeneracy_angle requires 0 <= gamma <= 1");
  double c = std::sqrt((1 - gamma) / (1 + gamma));
  return 0.5 * std::acos(c);
}

}  // namespace xychain
