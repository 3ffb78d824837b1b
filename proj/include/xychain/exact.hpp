#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xychain/spectrum.hpp"
#include "xychain/types.hpp"

namespace xychain {

struct SymMatrix {
  int dim = 0;
  std::vector<double> a;  // row-major, dim x dim

  explicit SymMatrix(int n = 0) : dim(n), a(std::size_t(n) * n, 0.0) {}
  double& at(int i, int j) { return a[std::size_t(i) * dim + j]; }
  double at(int i, int j) const { return a[std::size_t(i) * dim + j]; }
};

// Dense H_XY in the sigma^z product basis (bit = 1 means spin down), periodic
// bond L->1 included. Real symmetric. Guarded to L <= 13.
SymMatrix build_spin_hamiltonian(const ChainParams& params);

// Diagonal of prod_l sigma^z_l: (-1)^{#down} per basis state.
std::vector<int> parity_operator(int length);

enum class EigMethod { automatic, jacobi, lapack };

// Ascending eigenvalues of a real symmetric matrix. The Jacobi path is a
// cyclic sweep with a fixed budget (NoConvergence past it); automatic picks
// Jacobi for small matrices and LAPACK above.
std::vector<double> diagonalize(SymMatrix m, double tol = -1.0,
                                EigMethod method = EigMethod::automatic,
                                int max_sweeps = 100);

struct SpinSpectrum {
  ChainParams params;
  std::vector<double> even_levels;  // parity +1 block
  std::vector<double> odd_levels;   // parity -1 block
  std::vector<double> all_levels;   // sorted merge
};

SpinSpectrum parity_resolved_spectrum(const ChainParams& params,
                                      EigMethod method = EigMethod::automatic);

enum class CaseTag { case1 = 1, case2, case3, case4, case5 };

struct CaseResult {
  CaseTag tag = CaseTag::case1;
  double e_ns = 0, e_r = 0;          // sector vacuum energies
  double spin_gs = 0, spin_es = 0;   // two lowest spin levels
  bool spin_gs_degenerate = false;
  bool r_ground_in_spectrum = false;
  double tol = 0;
};

// Case taxonomy against the exact-diagonalization spectrum (L <= 13). The
// third case tests whether the R vacuum level itself appears among the spin
// levels; one parity half of each sector's enumeration always does.
CaseResult classify_case(const ChainParams& params, double tol = 1e-8,
                         EigMethod method = EigMethod::automatic);

// Same taxonomy from the fermionically constructed physical spectrum
// (validated parity rule); no diagonalization, usable at scan scale.
CaseResult classify_case_fermionic(const ChainParams& params,
                                   double tol = 1e-8);

struct MatchReport {
  // fractions[p][b]: fraction of fermionic levels of popcount parity p
  // (0 even, 1 odd) matched into spin block b (0 even, 1 odd, 2 all).
  double fractions[2][3] = {};
  double max_residual[2][3] = {};
  std::size_t counts[2] = {};
};

// Greedy nearest-level matching of a fermionic spectrum against the spin
// blocks; each spin level is consumed at most once per (parity, block) pass.
MatchReport match_spectra(const ManyBodySpectrum& fermionic,
                          const SpinSpectrum& exact, double tol);

struct RuleSelection {
  ParityFilter ns = ParityFilter::even;
  ParityFilter r = ParityFilter::even;
  double max_residual = 0;
  bool found = false;
  bool unique = false;
};

// Which (NS, R) popcount-parity pair reproduces the full spin spectrum as a
// multiset. Oracle-backed; validates physical_parity_filter.
RuleSelection select_parity_rule(const ChainParams& params, double tol = 1e-8,
                                 EigMethod method = EigMethod::automatic);

}  // namespace xychain
