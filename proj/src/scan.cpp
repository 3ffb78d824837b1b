#include "xychain/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "xychain/exact.hpp"
#include "xychain/geometry.hpp"
#include "xychain/spectrum.hpp"
#include "xychain/util.hpp"

namespace xychain {

namespace {

constexpr double kLineClearance = 1e-6;
constexpr double kXxLineGammaFloor = 1e-4;
constexpr double kZeroThreshold = 1e-30;

double line_distance(double g, double h) {
  double d = std::numeric_limits<double>::infinity();
  d = std::min(d, std::abs(g));
  d = std::min(d, std::abs(g - 1));
  d = std::min(d, std::abs(h));
  d = std::min(d, std::abs(h - 1));
  d = std::min(d, std::abs(std::hypot(g, h) - 1));
  return d;
}

}  // namespace

Grid::Grid(double gmin, double gmax, int ng, double hmin, double hmax, int nh)
    : gamma_min(gmin), gamma_max(gmax), h_min(hmin), h_max(hmax),
      n_gamma(ng), n_h(nh) {
  if (ng < 2 || nh < 2) fail(ErrorCode::invalid_argument, "grid needs >= 2 nodes per axis");
  if (!(gmax > gmin) || !(hmax > hmin))
    fail(ErrorCode::invalid_argument, "grid bounds must be increasing");
  for (int attempt = 0; attempt < 8; ++attempt) {
    bool clear = true;
    for (int i = 0; i < n_gamma && clear; ++i)
      for (int j = 0; j < n_h && clear; ++j)
        if (line_distance(gamma_at(i), h_at(j)) <= kLineClearance) clear = false;
    if (clear) return;
    offset += 1.0 / 64;  // deterministic nudge off the lines
  }
  fail(ErrorCode::invalid_argument, "grid nodes cannot be moved off the lines");
}

CaseMap scan_cases(const Grid& grid, int length, int threads) {
  CaseMap out;
  out.grid = grid;
  out.length = length;
  out.cases.assign(grid.size(), 0);
  out.delta.assign(grid.size(), 0.0);
  parallel_for(grid.size(), threads, [&](std::size_t idx) {
    int i = static_cast<int>(idx) / grid.n_h;
    int j = static_cast<int>(idx) % grid.n_h;
    ChainParams p{length, 1.0, grid.gamma_at(i), grid.h_at(j)};
    out.delta[idx] = delta_gs(p);
    try {
      out.cases[idx] = static_cast<std::int8_t>(classify_case_fermionic(p).tag);
    } catch (const Error&) {
      out.cases[idx] = 0;
    }
  });
  return out;
}

const char* map_quantity_name(MapQuantity q) {
  switch (q) {
    case MapQuantity::ricci_r: return "ricci-r";
    case MapQuantity::ricci_ns: return "ricci-ns";
    case MapQuantity::ricci_product: return "ricci-product";
    case MapQuantity::delta_ricci: return "delta-ricci";
    case MapQuantity::delta_e: return "delta-e";
  }
  return "?";
}

SignMap scan_sign(const Grid& grid, int length, MapQuantity quantity,
                  double clamp, int threads) {
  if (!(clamp > 0)) fail(ErrorCode::invalid_argument, "clamp must be positive");
  SignMap out;
  out.grid = grid;
  out.quantity = quantity;
  out.length = length;
  out.clamp = clamp;
  out.raw.assign(grid.size(), 0.0);
  out.clamped.assign(grid.size(), 0.0);
  out.sign.assign(grid.size(), 0);
  out.singular.assign(grid.size(), 0);
  parallel_for(grid.size(), threads, [&](std::size_t idx) {
    int i = static_cast<int>(idx) / grid.n_h;
    int j = static_cast<int>(idx) % grid.n_h;
    double g = grid.gamma_at(i), h = grid.h_at(j);
    double value = 0;
    bool singular = false;
    ChainParams p{length, 1.0, std::max(g, kXxLineGammaFloor), h};
    auto det_value = [&](Sector sec, bool& bad) {
      RicciResult r = ricci_scalar(p, sec);
      bad = bad || r.singular;
      if (r.singular) return 0.0;
      return std::abs(r.r_det) < 64 * r.r_det_noise ? 0.0 : r.r_det;
    };
    switch (quantity) {
      case MapQuantity::delta_e: {
        p.anisotropy = g;
        double v = delta_gs(p);
        if (std::abs(v) < delta_gs_noise_floor(p)) v = 0;
        value = v;
        break;
      }
      case MapQuantity::ricci_ns:
        value = det_value(Sector::ns, singular);
        break;
      case MapQuantity::ricci_r:
        value = det_value(Sector::r, singular);
        break;
      case MapQuantity::ricci_product: {
        double a = det_value(Sector::r, singular);
        double b = det_value(Sector::ns, singular);
        value = a * b;
        break;
      }
      case MapQuantity::delta_ricci: {
        RicciResult rr = ricci_scalar(p, Sector::r);
        RicciResult rn = ricci_scalar(p, Sector::ns);
        singular = rr.singular || rn.singular;
        if (!singular) value = rr.r_christoffel - rn.r_christoffel;
        break;
      }
    }
    out.singular[idx] = singular;
    out.raw[idx] = singular ? 0.0 : value;
    out.clamped[idx] = std::clamp(out.raw[idx], -clamp, clamp);
    out.sign[idx] = singular || std::abs(out.raw[idx]) < kZeroThreshold
                        ? 0
                        : (out.raw[idx] > 0 ? +1 : -1);
  });
  return out;
}

namespace {

struct FieldView {
  const Grid* grid;
  const std::vector<double>* values;
  const std::vector<std::uint8_t>* singular;  // may be null
};

using EdgeKey = std::uint64_t;  // (i, j, horizontal?) packed

EdgeKey edge_key(int i, int j, bool horizontal) {
  return (std::uint64_t(i) << 24) | (std::uint64_t(j) << 1) |
         (horizontal ? 1 : 0);
}

std::vector<ZeroCurve> march(const FieldView& f) {
  const Grid& grid = *f.grid;
  auto value = [&](int i, int j) { return (*f.values)[grid.index(i, j)]; };
  auto bad = [&](int i, int j) {
    return f.singular && (*f.singular)[grid.index(i, j)];
  };
  // Crossing points per edge; an edge hosts at most one sign change.
  std::map<EdgeKey, std::pair<double, double>> coords;
  std::map<EdgeKey, std::vector<EdgeKey>> adjacency;
  bool saddle_seen = false;

  auto crossing = [&](int i0, int j0, int i1, int j1) -> bool {
    double a = value(i0, j0), b = value(i1, j1);
    if (a == 0) a = kZeroThreshold;
    if (b == 0) b = kZeroThreshold;
    return (a > 0) != (b > 0);
  };
  auto interp = [&](int i0, int j0, int i1, int j1) {
    double a = value(i0, j0), b = value(i1, j1);
    if (a == 0) a = kZeroThreshold;
    if (b == 0) b = kZeroThreshold;
    double t = a / (a - b);
    return std::pair<double, double>{
        grid.gamma_at(i0) + t * (grid.gamma_at(i1) - grid.gamma_at(i0)),
        grid.h_at(j0) + t * (grid.h_at(j1) - grid.h_at(j0))};
  };

  for (int i = 0; i + 1 < grid.n_gamma; ++i) {
    for (int j = 0; j + 1 < grid.n_h; ++j) {
      if (bad(i, j) || bad(i + 1, j) || bad(i, j + 1) || bad(i + 1, j + 1))
        continue;
      // cell edges: bottom (j fixed, along gamma), right, top, left
      struct EdgeHit {
        EdgeKey key;
        std::pair<double, double> pt;
      };
      std::vector<EdgeHit> hits;
      if (crossing(i, j, i + 1, j))
        hits.push_back({edge_key(i, j, true), interp(i, j, i + 1, j)});
      if (crossing(i + 1, j, i + 1, j + 1))
        hits.push_back({edge_key(i + 1, j, false), interp(i + 1, j, i + 1, j + 1)});
      if (crossing(i, j + 1, i + 1, j + 1))
        hits.push_back({edge_key(i, j + 1, true), interp(i, j + 1, i + 1, j + 1)});
      if (crossing(i, j, i, j + 1))
        hits.push_back({edge_key(i, j, false), interp(i, j, i, j + 1)});
      if (hits.size() != 2 && hits.size() != 4) continue;
      auto link = [&](const EdgeHit& a, const EdgeHit& b) {
        coords[a.key] = a.pt;
        coords[b.key] = b.pt;
        adjacency[a.key].push_back(b.key);
        adjacency[b.key].push_back(a.key);
      };
      if (hits.size() == 2) {
        link(hits[0], hits[1]);
      } else {
        saddle_seen = true;
        double avg = 0.25 * (value(i, j) + value(i + 1, j) + value(i, j + 1) +
                             value(i + 1, j + 1));
        // hits order: bottom, right, top, left
        if (avg > 0) {
          link(hits[0], hits[1]);
          link(hits[2], hits[3]);
        } else {
          link(hits[0], hits[3]);
          link(hits[1], hits[2]);
        }
      }
    }
  }

  // Walk chains: open curves first (endpoints have one neighbour), then loops.
  std::vector<ZeroCurve> curves;
  std::map<EdgeKey, bool> used;
  auto walk = [&](EdgeKey start) {
    ZeroCurve curve;
    curve.had_saddle = saddle_seen;
    EdgeKey prev = 0;
    bool has_prev = false;
    EdgeKey cur = start;
    while (true) {
      used[cur] = true;
      curve.points.push_back(coords[cur]);
      EdgeKey next = 0;
      bool found = false;
      for (EdgeKey n : adjacency[cur]) {
        if (!used[n]) {
          next = n;
          found = true;
          break;
        }
        if ((!has_prev || n != prev) && n == start &&
            curve.points.size() > 2) {
          curve.closed = true;
        }
      }
      if (!found) break;
      prev = cur;
      has_prev = true;
      cur = next;
    }
    return curve;
  };
  for (auto& [key, nbrs] : adjacency) {
    if (used[key] || nbrs.size() != 1) continue;
    curves.push_back(walk(key));
  }
  for (auto& [key, nbrs] : adjacency) {
    if (used[key]) continue;
    curves.push_back(walk(key));
  }
  std::erase_if(curves, [](const ZeroCurve& c) { return c.points.size() < 3; });
  return curves;
}

}  // namespace

std::vector<ZeroCurve> extract_zero_curves(const SignMap& map) {
  return march({&map.grid, &map.raw, &map.singular});
}

std::vector<ZeroCurve> extract_case_boundaries(const CaseMap& map) {
  return march({&map.grid, &map.delta, nullptr});
}

ArcSet fit_arcs(const std::vector<ZeroCurve>& curves, int length) {
  ArcSet out;
  for (const auto& c : curves) {
    ArcFit fit;
    fit.n_points = static_cast<int>(c.points.size());
    // h^2 = h0^2 (1 - gamma^2): one-parameter least squares in h0^2.
    double num = 0, den = 0;
    for (auto [g, h] : c.points) {
      double x = 1 - g * g;
      num += x * h * h;
      den += x * x;
    }
    double h0sq = den > 0 ? num / den : 0;
    if (h0sq > 0) {
      fit.h0 = std::sqrt(h0sq);
      double ss = 0;
      for (auto [g, h] : c.points) {
        double pred = fit.h0 * std::sqrt(std::max(0.0, 1 - g * g));
        ss += (std::abs(h) - pred) * (std::abs(h) - pred);
      }
      fit.rms = std::sqrt(ss / c.points.size());
      fit.elliptic = fit.rms < 0.05;
    } else {
      fit.rms = std::numeric_limits<double>::infinity();
    }
    out.arcs.push_back(fit);
  }
  std::sort(out.arcs.begin(), out.arcs.end(),
            [](const ArcFit& a, const ArcFit& b) { return a.h0 < b.h0; });
  for (std::size_t i = 0; i < out.arcs.size(); ++i) {
    out.arcs[i].index = static_cast<int>(i) + 1;
    if (out.arcs[i].elliptic && out.arcs[i].n_points >= 10) ++out.accepted;
  }
  (void)length;
  return out;
}

SignSequence sign_sequence_scan(double gamma, double h,
                                const std::vector<int>& lengths) {
  SignSequence out;
  out.gamma = gamma;
  out.h = h;
  out.lengths = lengths;
  out.signs.reserve(lengths.size());
  int last = 0;
  for (int L : lengths) {
    ChainParams p{L, 1.0, gamma, h};
    double v = delta_gs(p);
    int s = std::abs(v) < delta_gs_noise_floor(p) ? 0 : (v > 0 ? +1 : -1);
    out.signs.push_back(s);
    if (s != 0) {
      if (last != 0 && s != last) ++out.change_count;
      last = s;
    }
  }
  return out;
}

}  // namespace xychain
