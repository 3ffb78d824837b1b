#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace xychain {

enum class ErrorCode {
  invalid_argument,
  index_error,
  domain_error,
  odd_length_negative_coupling,
  gapless_mode,
  capacity_error,
  no_convergence,
  unclassifiable,
  singular_point,
  stencil_crosses_singular,
  degenerate_metric,
  insufficient_data,
  branch_misfit,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

// Fermionic boundary sector of the Jordan-Wigner chain. NS is antiperiodic
// (parity label N_L = +1), R is periodic (N_L = -1).
enum class Sector { ns, r };

inline int sector_label(Sector s) { return s == Sector::ns ? +1 : -1; }
inline const char* sector_name(Sector s) { return s == Sector::ns ? "NS" : "R"; }

struct ChainParams {
  int length = 2;        // L
  double coupling = 1.0; // J
  double anisotropy = 0.0;
  double field = 0.0;

  void validate() const;
};

enum class RegionLabel {
  sigma1_minus,
  sigma2_minus,
  sigma_plus,
  line_ptl,
  line_cl_minus,
  line_cl_plus,
  line_trs_minus,
  line_trs_plus,
  line_xx_minus,
  line_xx_plus,
  point_xx,
  line_ising,
  point_ci,
};

const char* region_name(RegionLabel label);

// Classification result: the winning label under point > line > area
// precedence, plus every line/point set the query lies on.
struct RegionInfo {
  RegionLabel label;
  std::vector<RegionLabel> memberships;
};

}  // namespace xychain
