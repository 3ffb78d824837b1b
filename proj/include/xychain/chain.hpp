#pragma once

#include "xychain/types.hpp"

namespace xychain {

// Region taxonomy of the gamma-h plane. Precedence: points beat lines beat
// areas; among lines the enum order decides. Uses |gamma|, |h|. A point is on
// a set when its distance to it is below tol (absolute).
RegionInfo classify_region(double gamma, double h, double tol = 1e-9);

// Maps parameters to the canonical wedge gamma >= 0, h >= 0, J >= 0 using the
// symmetry transformations that leave the spectrum invariant. The J sign can
// only be absorbed on even chains (staggered reflection); odd L with J < 0 is
// rejected.
ChainParams canonicalize(const ChainParams& params);

// Angle chi of the degenerate product ground states on the parity transition
// line gamma^2 + h^2 = 1: cos^2(2 chi) = (1 - gamma) / (1 + gamma).
double ptl_degeneracy_angle(double gamma);

}  // namespace xychain
