#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "xychain/exact.hpp"

using namespace xychain;

TEST_CASE("field-only chain is diagonal with the magnetization ladder") {
  ChainParams p{4, 0.0, 0.7, 0.9};
  SymMatrix H = build_spin_hamiltonian(p);
  for (int i = 0; i < H.dim; ++i)
    for (int j = 0; j < H.dim; ++j)
      if (i != j) CHECK(H.at(i, j) == 0.0);
  auto w = diagonalize(H);
  // eigenvalues -h/2 (L - 2 m), m = #down
  CHECK(w.front() == doctest::Approx(-0.9 * 2));
  CHECK(w.back() == doctest::Approx(0.9 * 2));
}

TEST_CASE("Hamiltonian is exactly symmetric") {
  SymMatrix H = build_spin_hamiltonian({6, 1.0, 0.4, 0.7});
  for (int i = 0; i < H.dim; ++i)
    for (int j = 0; j < H.dim; ++j)
      CHECK(H.at(i, j) == H.at(j, i));
}

TEST_CASE("parity operator entries") {
  auto p = parity_operator(3);
  CHECK(p[0] == 1);        // all up
  CHECK(p[1] == -1);       // one flipped
  CHECK(p[0b111] == -1);   // |down down down>
}

TEST_CASE("parity blocks are exactly decoupled") {
  SymMatrix H = build_spin_hamiltonian({5, 1.0, 0.6, 0.3});
  auto par = parity_operator(5);
  for (int i = 0; i < H.dim; ++i)
    for (int j = 0; j < H.dim; ++j)
      if (par[i] != par[j]) CHECK(H.at(i, j) == 0.0);
}

TEST_CASE("diagonalize on small fixtures") {
  SymMatrix id(3);
  for (int i = 0; i < 3; ++i) id.at(i, i) = 1.0;
  auto w = diagonalize(id);
  for (double v : w) CHECK(v == doctest::Approx(1.0));

  SymMatrix d(3);
  d.at(0, 0) = 3;
  d.at(1, 1) = 1;
  d.at(2, 2) = 2;
  w = diagonalize(d);
  CHECK(w[0] == doctest::Approx(1));
  CHECK(w[1] == doctest::Approx(2));
  CHECK(w[2] == doctest::Approx(3));

  SymMatrix x(2);
  x.at(0, 1) = x.at(1, 0) = 1.0;
  w = diagonalize(x);
  CHECK(w[0] == doctest::Approx(-1));
  CHECK(w[1] == doctest::Approx(1));
}

TEST_CASE("Jacobi and LAPACK agree") {
  std::mt19937 rng(5);
  std::normal_distribution<double> n(0, 1);
  SymMatrix m(40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j <= i; ++j) m.at(i, j) = m.at(j, i) = n(rng);
  auto wj = diagonalize(m, -1.0, EigMethod::jacobi);
  auto wl = diagonalize(m, -1.0, EigMethod::lapack);
  for (int i = 0; i < 40; ++i) CHECK(std::abs(wj[i] - wl[i]) < 1e-11);
}

TEST_CASE("Jacobi reports exhausted sweep budgets") {
  std::mt19937 rng(17);
  std::normal_distribution<double> n(0, 1);
  SymMatrix m(24);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j <= i; ++j) m.at(i, j) = m.at(j, i) = n(rng);
  CHECK_THROWS_AS(diagonalize(m, 1e-14, EigMethod::jacobi, 1), Error);
}

TEST_CASE("parity-resolved spectrum structure") {
  ChainParams p{8, 1.0, 0.3, 0.5};
  SpinSpectrum s = parity_resolved_spectrum(p);
  CHECK(s.even_levels.size() == 128);
  CHECK(s.odd_levels.size() == 128);
  CHECK(s.all_levels.size() == 256);
  auto full = diagonalize(build_spin_hamiltonian(p));
  for (std::size_t i = 0; i < full.size(); ++i)
    CHECK(std::abs(full[i] - s.all_levels[i]) < 1e-9);
}

TEST_CASE("Ising chain at zero field has a doubly degenerate ground state") {
  SpinSpectrum s = parity_resolved_spectrum({8, 1.0, 1.0, 0.0});
  CHECK(s.all_levels[1] - s.all_levels[0] < 1e-10);
}

TEST_CASE("level-resolved invariance under the symmetry folds") {
  for (int L : {6, 8, 10}) {
    ChainParams base{L, 1.0, 0.7, 0.4};
    auto ref = parity_resolved_spectrum(base).all_levels;
    for (ChainParams v :
         {ChainParams{L, 1.0, -0.7, 0.4}, ChainParams{L, 1.0, 0.7, -0.4},
          ChainParams{L, -1.0, 0.7, 0.4}}) {
      auto w = parity_resolved_spectrum(v).all_levels;
      for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(w[i] - ref[i]) < 1e-10);
    }
  }
}

TEST_CASE("empirical parity rule matches the closed form") {
  for (int L : {4, 5, 6, 7, 8}) {
    for (auto [g, h] : {std::pair{0.3, 0.5}, {0.7, 1.1}, {1.3, 0.5},
                        {0.45, 0.15}, {1.05, 0.95}}) {
      ChainParams p{L, 1.0, g, h};
      RuleSelection rule = select_parity_rule(p);
      REQUIRE(rule.found);
      CHECK(rule.max_residual < 1e-8);
      CHECK(rule.ns == physical_parity_filter(p, Sector::ns));
      CHECK(rule.r == physical_parity_filter(p, Sector::r));
    }
  }
}

TEST_CASE("case classification highlights") {
  // right on the parity transition line: case 5
  CHECK(classify_case({8, 1.0, 0.6, 0.8}).tag == CaseTag::case5);
  // above h = 1 the R vacuum drops out of the spectrum: case 3
  CaseResult far = classify_case({8, 1.0, 0.5, 1.5});
  CHECK(far.tag == CaseTag::case3);
  CHECK_FALSE(far.r_ground_in_spectrum);
  // just above the first inner arc at gamma = 0.3 (arc at h = 0.192): case 2
  CHECK(classify_case({8, 1.0, 0.3, 0.212}).tag == CaseTag::case2);
  CHECK(classify_case({8, 1.0, 0.3, 0.172}).tag == CaseTag::case1);
}

TEST_CASE("fermionic classifier agrees with the oracle") {
  for (int L : {5, 6, 8}) {
    for (double g = 0.15; g < 1.6; g += 0.35) {
      for (double h = 0.1; h < 1.6; h += 0.3) {
        ChainParams p{L, 1.0, g, h};
        CHECK(classify_case(p).tag == classify_case_fermionic(p).tag);
      }
    }
  }
}

TEST_CASE("matching a spectrum against itself") {
  ChainParams p{6, 1.0, 0.4, 0.7};
  SpinSpectrum spin = parity_resolved_spectrum(p);
  auto ns = enumerate_many_body(p, Sector::ns, ParityFilter::any, 1 << 6);
  MatchReport rep = match_spectra(ns, spin, 1e-8);
  // NS physical half fully matches the spin spectrum; its even half lands in
  // one parity block.
  int keep = physical_parity_filter(p, Sector::ns) == ParityFilter::even ? 0 : 1;
  CHECK(rep.fractions[keep][2] == doctest::Approx(1.0));
  CHECK(rep.max_residual[keep][2] < 1e-10);
}

TEST_CASE("J = 0 spin and fermion spectra coincide") {
  ChainParams p{6, 0.0, 0.9, 0.8};
  SpinSpectrum spin = parity_resolved_spectrum(p);
  auto mb = enumerate_many_body(p, Sector::r, ParityFilter::any, 1 << 6);
  for (std::size_t i = 0; i < mb.levels.size(); ++i)
    CHECK(mb.levels[i].energy ==
          doctest::Approx(spin.all_levels[i]).epsilon(1e-12));
}
