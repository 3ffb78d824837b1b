#pragma once

#include <cstdint>
#include <vector>

#include "xychain/scaling.hpp"
#include "xychain/types.hpp"

namespace xychain {

// Rectangular scan grid. Nodes sit at half-cell offsets strictly inside the
// declared rectangle; construction verifies no node lies within 1e-6 of a
// defined line (gamma = 0/1, h = 0/1, the unit circle, P_XX) and nudges the
// offset deterministically if one does.
struct Grid {
  double gamma_min = 0, gamma_max = 1;
  double h_min = 0, h_max = 1;
  int n_gamma = 2, n_h = 2;
  double offset = 0.5;

  Grid() = default;
  Grid(double gmin, double gmax, int ng, double hmin, double hmax, int nh);

  double gamma_at(int i) const {
    return gamma_min + (i + offset) * (gamma_max - gamma_min) / n_gamma;
  }
  double h_at(int j) const {
    return h_min + (j + offset) * (h_max - h_min) / n_h;
  }
  std::size_t size() const { return std::size_t(n_gamma) * n_h; }
  std::size_t index(int i, int j) const { return std::size_t(i) * n_h + j; }
};

struct CaseMap {
  Grid grid;
  int length = 0;
  std::vector<std::int8_t> cases;  // 1..5, 0 = unclassifiable
  std::vector<double> delta;       // delta_gs per node (arc indicator)
};

// Per-node case labels from the fermionically constructed physical spectrum
// (parity rule validated against the dense oracle elsewhere).
CaseMap scan_cases(const Grid& grid, int length, int threads = 0);

enum class MapQuantity { ricci_r, ricci_ns, ricci_product, delta_ricci, delta_e };
const char* map_quantity_name(MapQuantity q);

struct SignMap {
  Grid grid;
  MapQuantity quantity = MapQuantity::ricci_r;
  int length = 0;
  double clamp = 1.0;
  std::vector<double> raw;
  std::vector<double> clamped;
  std::vector<std::int8_t> sign;      // -1, 0, +1
  std::vector<std::uint8_t> singular;
};

SignMap scan_sign(const Grid& grid, int length, MapQuantity quantity,
                  double clamp, int threads = 0);

struct ZeroCurve {
  std::vector<std::pair<double, double>> points;  // (gamma, h)
  bool closed = false;
  bool had_saddle = false;
};

// Marching squares on the sign field; crossing positions interpolate the raw
// values linearly; cells touching singular nodes are skipped; saddles resolve
// by the average-of-corners rule; curves shorter than 3 points are dropped.
std::vector<ZeroCurve> extract_zero_curves(const SignMap& map);

// Same machinery on a case map's delta field (the case-1/case-2 boundary).
std::vector<ZeroCurve> extract_case_boundaries(const CaseMap& map);

struct ArcFit {
  int index = 0;  // 1-based, ascending h0
  double h0 = 0;
  double rms = 0;
  int n_points = 0;
  bool elliptic = false;  // rms within the acceptance bound
};

struct ArcSet {
  std::vector<ArcFit> arcs;  // every input curve, ascending h0
  int accepted = 0;          // count with >= 10 points and rms < 0.05
};

// Least-squares h0 per curve against gamma^2 + (h/h0)^2 = 1.
ArcSet fit_arcs(const std::vector<ZeroCurve>& curves, int length);

struct SignSequence {
  double gamma = 0, h = 0;
  std::vector<int> lengths;
  std::vector<int> signs;  // 0 when below the roundoff floor
  int change_count = 0;    // strict +/- alternations among nonzero entries
};

SignSequence sign_sequence_scan(double gamma, double h,
                                const std::vector<int>& lengths);

}  // namespace xychain
