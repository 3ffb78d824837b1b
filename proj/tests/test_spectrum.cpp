#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "xychain/chain.hpp"
#include "xychain/spectrum.hpp"

using namespace xychain;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent quadrature oracle: composite Simpson with interval doubling.
double integrate_oracle(double (*f)(double, double, double), double gamma,
                        double h, double a, double b, double tol) {
  auto eval = [&](int n) {
    double acc = f(a, gamma, h) + f(b, gamma, h);
    double dx = (b - a) / n;
    for (int i = 1; i < n; ++i)
      acc += (i % 2 ? 4.0 : 2.0) * f(a + i * dx, gamma, h);
    return acc * dx / 3.0;
  };
  double prev = eval(64);
  for (int n = 128; n <= 1 << 20; n *= 2) {
    double cur = eval(n);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

double dispersion(double phi, double gamma, double h) {
  double u = h - std::cos(phi);
  return std::sqrt(u * u + gamma * gamma * std::sin(phi) * std::sin(phi));
}

}  // namespace

TEST_CASE("mode phases") {
  ChainParams p10{10, 1.0, 0.5, 0.5};
  CHECK(mode_phase(10, p10, Sector::r) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(mode_phase(1, p10, Sector::ns) == doctest::Approx(kPi / 10).epsilon(1e-15));
  CHECK(mode_phase(5, p10, Sector::r) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK_THROWS_AS(mode_phase(0, p10, Sector::r), Error);
  CHECK_THROWS_AS(mode_phase(11, p10, Sector::r), Error);
}

TEST_CASE("single-particle energies") {
  ChainParams ising{8, 1.0, 1.0, 0.0};
  for (int k = 1; k <= 8; ++k) {
    CHECK(single_particle_energy(ising, Sector::r, k) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(single_particle_energy(ising, Sector::ns, k) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  ChainParams xx{8, 1.0, 0.0, 1.0};
  CHECK(single_particle_energy(xx, Sector::r, 4) ==  // phi = pi
        doctest::Approx(2.0).epsilon(1e-14));
  ChainParams p4{4, 1.0, 0.5, 0.5};
  CHECK(single_particle_energy(p4, Sector::r, 1) ==  // phi = pi/2
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("Bogoliubov angle branches") {
  // gamma = 0, h - cos phi > 0: theta = 0
  ChainParams a{8, 1.0, 0.0, 2.0};
  CHECK(bogoliubov_angle(a, Sector::r, 1) == doctest::Approx(0.0));
  // gamma = 0, h - cos phi < 0 (phi = pi/4, cos > h): theta = pi
  ChainParams b{8, 1.0, 0.0, 0.5};
  CHECK(bogoliubov_angle(b, Sector::r, 1) == doctest::Approx(kPi));
  // gamma = 1, h = 0, phi = pi/2: atan2(1, 0) = pi/2
  ChainParams c{4, 1.0, 1.0, 0.0};
  CHECK(bogoliubov_angle(c, Sector::r, 1) == doctest::Approx(kPi / 2));
  // gapless: R sector phi = 0 mode at h = 1
  ChainParams d{8, 1.0, 0.5, 1.0};
  CHECK_THROWS_AS(bogoliubov_angle(d, Sector::r, 8), Error);
}

TEST_CASE("sector ground energies") {
  ChainParams ising{12, 1.0, 1.0, 0.0};
  CHECK(sector_ground_energy(ising, Sector::ns) ==
        doctest::Approx(-6.0).epsilon(1e-14));
  CHECK(sector_ground_energy(ising, Sector::r) ==
        doctest::Approx(-6.0).epsilon(1e-14));
  // gamma = 0, h = 0, L = 4, R: phases pi/2, pi, 3pi/2, 2pi -> |cos| sums to 2
  ChainParams zero{4, 1.0, 0.0, 0.0};
  CHECK(sector_ground_energy(zero, Sector::r) ==
        doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("large-L ground energy approaches the integral form") {
  ChainParams p{1000, 1.0, 0.5, 0.5};
  double integral =
      integrate_oracle(dispersion, 0.5, 0.5, 0.0, 2 * kPi, 1e-12);
  double expected = -integral / (4 * kPi);
  for (Sector s : {Sector::ns, Sector::r}) {
    double per_site = sector_ground_energy(p, s) / p.length;
    CHECK(per_site == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("first excited state") {
  ChainParams ising{8, 1.0, 1.0, 0.0};
  CHECK(sector_first_excited(ising, Sector::ns) ==
        doctest::Approx(-3.0).epsilon(1e-13));
  // gamma=0, h=1, R, even L: gapless mode at phi = 0
  ChainParams xx{8, 1.0, 0.0, 1.0};
  CHECK(sector_first_excited(xx, Sector::r) ==
        doctest::Approx(sector_ground_energy(xx, Sector::r)).epsilon(1e-13));
  // exhaustive min over modes
  ChainParams p{8, 1.0, 0.5, 0.5};
  double emin = 1e300;
  for (int k = 1; k <= 8; ++k)
    emin = std::min(emin, single_particle_energy(p, Sector::ns, k));
  CHECK(sector_first_excited(p, Sector::ns) ==
        doctest::Approx(sector_ground_energy(p, Sector::ns) + emin));
}

TEST_CASE("many-body enumeration at L=2, gamma=1, h=0") {
  ChainParams p{2, 1.0, 1.0, 0.0};
  auto any = enumerate_many_body(p, Sector::r, ParityFilter::any, 4);
  REQUIRE(any.levels.size() == 4);
  CHECK(any.levels[0].energy == doctest::Approx(-1.0));
  CHECK(any.levels[1].energy == doctest::Approx(0.0));
  CHECK(any.levels[2].energy == doctest::Approx(0.0));
  CHECK(any.levels[3].energy == doctest::Approx(1.0));
  CHECK_FALSE(any.truncated);

  auto even = enumerate_many_body(p, Sector::r, ParityFilter::even, 2);
  REQUIRE(even.levels.size() == 2);
  CHECK(even.levels[0].energy == doctest::Approx(-1.0));
  CHECK(even.levels[1].energy == doctest::Approx(1.0));
}

TEST_CASE("parity-filtered enumerations merge to the full one") {
  ChainParams p{10, 1.0, 0.3, 0.7};
  auto any = enumerate_many_body(p, Sector::ns, ParityFilter::any, 1 << 10);
  auto even = enumerate_many_body(p, Sector::ns, ParityFilter::even, 1 << 9);
  auto odd = enumerate_many_body(p, Sector::ns, ParityFilter::odd, 1 << 9);
  REQUIRE(any.levels.size() == even.levels.size() + odd.levels.size());
  std::vector<double> merged;
  for (const auto& lv : even.levels) merged.push_back(lv.energy);
  for (const auto& lv : odd.levels) merged.push_back(lv.energy);
  std::sort(merged.begin(), merged.end());
  for (std::size_t i = 0; i < merged.size(); ++i)
    CHECK(merged[i] == any.levels[i].energy);
}

TEST_CASE("best-first truncation returns the lowest levels") {
  ChainParams p{12, 1.0, 0.45, 0.8};
  auto full = enumerate_many_body(p, Sector::r, ParityFilter::any, 1 << 12);
  auto capped = enumerate_many_body(p, Sector::r, ParityFilter::any, 100);
  CHECK(capped.truncated);
  REQUIRE(capped.levels.size() == 100);
  for (int i = 0; i < 100; ++i)
    CHECK(capped.levels[i].energy == doctest::Approx(full.levels[i].energy));
  // occupation masks are unique
  auto sorted = capped.levels;
  std::sort(sorted.begin(), sorted.end(),
            [](auto& a, auto& b) { return a.occupation < b.occupation; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    CHECK(sorted[i].occupation != sorted[i - 1].occupation);
  // level energies are reconstructible from their masks
  for (const auto& lv : capped.levels) {
    double e = sector_ground_energy(p, Sector::r);
    for (int b = 0; b < 12; ++b)
      if (lv.occupation >> b & 1)
        e += single_particle_energy(p, Sector::r, b + 1);
    CHECK(e == doctest::Approx(lv.energy).epsilon(1e-13));
    CHECK(lv.parity == (std::popcount(lv.occupation) % 2 == 0 ? 1 : -1));
  }
}

TEST_CASE("complete enumeration above L=24 is rejected without allocating") {
  ChainParams p{30, 1.0, 0.5, 0.5};
  CHECK_THROWS_AS(
      enumerate_many_body(p, Sector::ns, ParityFilter::any, std::uint64_t{1} << 30),
      Error);
  // capped query at the same L is fine
  auto mb = enumerate_many_body(p, Sector::ns, ParityFilter::any, 16);
  CHECK(mb.levels.size() == 16);
  // masks are 64-bit
  ChainParams wide{70, 1.0, 0.5, 0.5};
  CHECK_THROWS_AS(enumerate_many_body(wide, Sector::ns, ParityFilter::any, 4),
                  Error);
}

TEST_CASE("delta_gs basics") {
  ChainParams ising{16, 1.0, 1.0, 0.0};
  CHECK(delta_gs(ising) == doctest::Approx(0.0).epsilon(1e-15));
  // monotone decrease of |dE| under L -> 2L off the critical lines
  double d1 = std::abs(delta_gs({16, 1.0, 0.5, 0.5}));
  double d2 = std::abs(delta_gs({32, 1.0, 0.5, 0.5}));
  double d3 = std::abs(delta_gs({64, 1.0, 0.5, 0.5}));
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  // ratio consistent with an exponential trend
  double beta1 = std::log(d1 / d2) / 16.0;
  double beta2 = std::log(d2 / d3) / 32.0;
  CHECK(beta1 == doctest::Approx(beta2).epsilon(0.2));
}

TEST_CASE("critical gap scaling: |dE| L -> pi gamma / 4") {
  // The closed form the asymptotics must satisfy (also fixed independently by
  // the c = 1/2 free-fermion tower: delta E = -2 pi v / (8 L) with v = gamma).
  for (double gamma : {0.3, 0.5, 1.0}) {
    ChainParams p{800, 1.0, gamma, 1.0};
    double d = delta_gs(p);
    CHECK(d < 0);
    CHECK(std::abs(d) * 800 ==
          doctest::Approx(kPi * gamma / 4).epsilon(5e-3));
  }
}

TEST_CASE("exact degeneracy on the parity transition line") {
  for (int L : {8, 16, 32, 64}) {
    for (double gamma : {0.6, 0.8, 1 / std::sqrt(2.0)}) {
      ChainParams p{L, 1.0, gamma, std::sqrt(1 - gamma * gamma)};
      CHECK(std::abs(delta_gs(p)) < 1e-10 * L);
      CHECK(std::abs(sector_ground_energy(p, Sector::ns) -
                     sector_ground_energy(p, Sector::r)) < 1e-10 * L);
    }
  }
}

TEST_CASE("energies are nonnegative and symmetric under the sign folds") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  for (int trial = 0; trial < 60; ++trial) {
    ChainParams p{10, 1.0, u(rng), u(rng)};
    ChainParams q = canonicalize(p);
    for (Sector s : {Sector::ns, Sector::r}) {
      std::vector<double> ep, eq;
      for (int k = 1; k <= p.length; ++k) {
        double e = single_particle_energy(p, s, k);
        CHECK(e >= 0.0);
        ep.push_back(e);
        eq.push_back(single_particle_energy(q, s, k));
      }
      std::sort(ep.begin(), ep.end());
      std::sort(eq.begin(), eq.end());
      for (std::size_t i = 0; i < ep.size(); ++i)
        CHECK(std::abs(ep[i] - eq[i]) < 1e-12);
    }
  }
}

TEST_CASE("R-sector dispersion is reflection symmetric") {
  ChainParams p{9, 1.0, 0.7, 0.4};
  for (int k = 1; k < p.length; ++k) {
    double phi = mode_phase(k, p, Sector::r);
    double mirrored = 2 * kPi - phi;
    double u = p.field - std::cos(mirrored);
    double e2 = std::hypot(u, p.anisotropy * std::sin(mirrored));
    CHECK(single_particle_energy(p, Sector::r, k) ==
          doctest::Approx(e2).epsilon(1e-13));
  }
}

TEST_CASE("vacuum parity and the physical selection rule") {
  // Even L, h < 1: R vacuum holds one self-conjugate fermion (phi = pi).
  ChainParams a{8, 1.0, 0.3, 0.5};
  CHECK(vacuum_parity(a, Sector::ns) == 0);
  CHECK(vacuum_parity(a, Sector::r) == 1);
  CHECK(physical_parity_filter(a, Sector::ns) == ParityFilter::even);
  CHECK(physical_parity_filter(a, Sector::r) == ParityFilter::even);
  // Even L, h > 1: the phi = 0 mode joins, flipping the R rule.
  ChainParams b{8, 1.0, 0.3, 1.5};
  CHECK(vacuum_parity(b, Sector::r) == 0);
  CHECK(physical_parity_filter(b, Sector::r) == ParityFilter::odd);
  // Odd L: NS gains the phi = pi self-conjugate mode.
  ChainParams c{7, 1.0, 0.3, 0.5};
  CHECK(vacuum_parity(c, Sector::ns) == 1);
  CHECK(physical_parity_filter(c, Sector::ns) == ParityFilter::even);
  CHECK(physical_parity_filter(c, Sector::r) == ParityFilter::even);
}
