#include "xychain/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "xychain/util.hpp"

namespace xychain {

namespace {

constexpr double kGaplessTol = 1e-14;

void check_mode_index(int k, int length) {
  if (k < 1 || k > length)
    fail(ErrorCode::index_error, "mode index k must be in 1..L");
}

}  // namespace

double mode_phase(int k, const ChainParams& params, Sector sector) {
  params.validate();
  check_mode_index(k, params.length);
  double zeta = 2.0 * std::numbers::pi * k / params.length;
  double shift = sector == Sector::ns ? std::numbers::pi / params.length : 0.0;
  return zeta - shift;
}

double single_particle_energy(const ChainParams& params, Sector sector, int k) {
  double phi = mode_phase(k, params, sector);
  double u = params.field - params.coupling * std::cos(phi);
  double v = params.anisotropy * params.coupling * std::sin(phi);
  return std::hypot(u, v);
}

double bogoliubov_angle(const ChainParams& params, Sector sector, int k) {
  double phi = mode_phase(k, params, sector);
  double u = params.field - params.coupling * std::cos(phi);
  double v = params.anisotropy * params.coupling * std::sin(phi);
  if (std::abs(u) < kGaplessTol && std::abs(v) < kGaplessTol)
    fail(ErrorCode::gapless_mode, "gapless mode: Bogoliubov angle undefined");
  return std::atan2(v, u);
}

SingleParticleSpectrum single_particle_spectrum(const ChainParams& params,
                                                Sector sector) {
  params.validate();
  SingleParticleSpectrum out;
  out.params = params;
  out.sector = sector;
  out.phase.resize(params.length);
  out.energy.resize(params.length);
  out.angle.resize(params.length);
  for (int k = 1; k <= params.length; ++k) {
    double phi = mode_phase(k, params, sector);
    double u = params.field - params.coupling * std::cos(phi);
    double v = params.anisotropy * params.coupling * std::sin(phi);
    out.phase[k - 1] = phi;
    out.energy[k - 1] = std::hypot(u, v);
    out.angle[k - 1] = (std::abs(u) < kGaplessTol && std::abs(v) < kGaplessTol)
                           ? std::numeric_limits<double>::quiet_NaN()
                           : std::atan2(v, u);
  }
  return out;
}

double sector_ground_energy(const ChainParams& params, Sector sector) {
  params.validate();
  KahanSum sum;
  for (int k = 1; k <= params.length; ++k)
    sum.add(single_particle_energy(params, sector, k));
  return -0.5 * sum.value();
}

double sector_first_excited(const ChainParams& params, Sector sector) {
  params.validate();
  KahanSum sum;
  double emin = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= params.length; ++k) {
    double e = single_particle_energy(params, sector, k);
    sum.add(e);
    emin = std::min(emin, e);
  }
  return -0.5 * sum.value() + emin;
}

double delta_gs(const ChainParams& params) {
  params.validate();
  KahanSum diff;
  for (int k = 1; k <= params.length; ++k)
    diff.add(single_particle_energy(params, Sector::ns, k) -
             single_particle_energy(params, Sector::r, k));
  return -0.5 * diff.value();
}

double delta_gs_noise_floor(const ChainParams& params) {
  return 64.0 * std::numeric_limits<double>::epsilon() * params.length *
         std::max(1.0, std::abs(params.coupling) + std::abs(params.field));
}

ManyBodySpectrum enumerate_many_body(const ChainParams& params, Sector sector,
                                     ParityFilter filter, std::uint64_t cap) {
  params.validate();
  if (cap < 1) fail(ErrorCode::invalid_argument, "cap must be >= 1");
  int L = params.length;
  if (L > 63)
    fail(ErrorCode::capacity_error,
         "occupation masks are 64-bit: enumeration limited to L <= 63");
  std::uint64_t matching_total =
      filter == ParityFilter::any
          ? (L < 64 ? (std::uint64_t{1} << L) : std::uint64_t(-1))
          : (L - 1 < 64 ? (std::uint64_t{1} << (L - 1)) : std::uint64_t(-1));
  if (cap >= matching_total && L > 24)
    fail(ErrorCode::capacity_error,
         "complete enumeration requested for L > 24");

  std::vector<double> eps(L);
  for (int k = 1; k <= L; ++k)
    eps[k - 1] = single_particle_energy(params, sector, k);
  double e0 = sector_ground_energy(params, sector);

  ManyBodySpectrum out;
  out.sector = sector;
  auto want = [&](int pop) {
    switch (filter) {
      case ParityFilter::any: return true;
      case ParityFilter::even: return pop % 2 == 0;
      case ParityFilter::odd: return pop % 2 == 1;
    }
    return true;
  };

  if (cap >= matching_total) {
    // Complete enumeration; masks are over original mode indices.
    std::uint64_t total = std::uint64_t{1} << L;
    out.levels.reserve(matching_total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      int pop = std::popcount(mask);
      if (!want(pop)) continue;
      double e = 0;
      for (int b = 0; b < L; ++b)
        if (mask >> b & 1) e += eps[b];
      out.levels.push_back({e0 + e, mask, pop % 2 == 0 ? +1 : -1});
    }
    std::sort(out.levels.begin(), out.levels.end(),
              [](const ManyBodyLevel& a, const ManyBodyLevel& b) {
                return a.energy != b.energy ? a.energy < b.energy
                                            : a.occupation < b.occupation;
              });
    out.truncated = false;
    return out;
  }

  // Best-first expansion over modes sorted by energy. A state is (sum, mask
  // over sorted indices, highest sorted index used); children are "append
  // next mode" and "replace highest mode with next", which enumerates every
  // subset exactly once in nondecreasing-sum order.
  std::vector<int> order(L);
  for (int i = 0; i < L; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return eps[a] < eps[b]; });
  std::vector<double> se(L);
  for (int i = 0; i < L; ++i) se[i] = eps[order[i]];

  struct Node {
    double sum;
    std::uint64_t mask;  // over sorted indices
    int top;             // highest sorted index in mask, -1 for empty
  };
  auto cmp = [](const Node& a, const Node& b) { return a.sum > b.sum; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  heap.push({0.0, 0, -1});
  auto to_original = [&](std::uint64_t sorted_mask) {
    std::uint64_t m = 0;
    for (int i = 0; i < L; ++i)
      if (sorted_mask >> i & 1) m |= std::uint64_t{1} << order[i];
    return m;
  };

  while (!heap.empty() && out.levels.size() < cap) {
    Node n = heap.top();
    heap.pop();
    int pop = std::popcount(n.mask);
    if (want(pop))
      out.levels.push_back(
          {e0 + n.sum, to_original(n.mask), pop % 2 == 0 ? +1 : -1});
    if (n.top + 1 < L) {
      heap.push({n.sum + se[n.top + 1],
                 n.mask | (std::uint64_t{1} << (n.top + 1)), n.top + 1});
      if (n.top >= 0)
        heap.push({n.sum - se[n.top] + se[n.top + 1],
                   (n.mask & ~(std::uint64_t{1} << n.top)) |
                       (std::uint64_t{1} << (n.top + 1)),
                   n.top + 1});
    }
  }
  out.truncated = out.levels.size() >= cap && cap < matching_total;
  std::stable_sort(out.levels.begin(), out.levels.end(),
                   [](const ManyBodyLevel& a, const ManyBodyLevel& b) {
                     return a.energy < b.energy;
                   });
  return out;
}

int vacuum_parity(const ChainParams& params, Sector sector) {
  params.validate();
  int parity = 0;
  for (int k = 1; k <= params.length; ++k) {
    double phi = mode_phase(k, params, sector);
    if (std::abs(std::sin(phi)) > 1e-12) continue;  // paired modes: even
    double diag = params.coupling * std::cos(phi) - params.field;
    if (diag < 0) parity ^= 1;  // self-conjugate mode occupied in the vacuum
  }
  return parity;
}

ParityFilter physical_parity_filter(const ChainParams& params, Sector sector) {
  int p = (sector == Sector::r ? 1 : 0) ^ (params.length & 1) ^
          vacuum_parity(params, sector);
  return p == 0 ? ParityFilter::even : ParityFilter::odd;
}

std::vector<double> physical_spectrum(const ChainParams& params) {
  if (params.length > 24)
    fail(ErrorCode::capacity_error, "physical_spectrum limited to L <= 24");
  std::vector<double> all;
  all.reserve(std::size_t{1} << params.length);
  for (Sector s : {Sector::ns, Sector::r}) {
    auto mb = enumerate_many_body(params, s, physical_parity_filter(params, s),
                                  std::uint64_t{1} << params.length);
    for (const auto& lv : mb.levels) all.push_back(lv.energy);
  }
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<double> physical_lowest(const ChainParams& params,
                                    std::size_t count) {
  std::vector<double> all;
  for (Sector s : {Sector::ns, Sector::r}) {
    auto mb = enumerate_many_body(params, s, physical_parity_filter(params, s),
                                  count);
    for (const auto& lv : mb.levels) all.push_back(lv.energy);
  }
  std::sort(all.begin(), all.end());
  if (all.size() > count) all.resize(count);
  return all;
}

}  // namespace xychain
