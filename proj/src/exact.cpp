#include "xychain/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

extern "C" {
void dsyev_(const char* jobz, const char* uplo, const int* n, double* a,
            const int* lda, double* w, double* work, const int* lwork,
            int* info);
}

namespace xychain {

namespace {

constexpr int kMaxExactLength = 13;

void check_exact_length(int L) {
  if (L > kMaxExactLength)
    fail(ErrorCode::capacity_error, "dense diagonalization limited to L <= 13");
}

std::vector<double> eig_lapack(SymMatrix& m) {
  int n = m.dim;
  std::vector<double> w(n);
  int lwork = -1, info = 0;
  double wsize = 0;
  dsyev_("N", "U", &n, m.a.data(), &n, w.data(), &wsize, &lwork, &info);
  lwork = static_cast<int>(wsize);
  std::vector<double> work(std::max(lwork, 1));
  dsyev_("N", "U", &n, m.a.data(), &n, w.data(), work.data(), &lwork, &info);
  if (info != 0) fail(ErrorCode::no_convergence, "dsyev failed to converge");
  return w;
}

std::vector<double> eig_jacobi(SymMatrix& m, double tol, int max_sweeps) {
  int n = m.dim;
  if (n == 1) return {m.at(0, 0)};
  auto off_norm = [&] {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += m.at(i, j) * m.at(i, j);
    return std::sqrt(2 * s);
  };
  if (tol <= 0) {
    double norm = 0;
    for (double v : m.a) norm += v * v;
    tol = 1e-12 * std::sqrt(norm);
    if (tol == 0) tol = 1e-300;
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol) {
      std::vector<double> w(n);
      for (int i = 0; i < n; ++i) w[i] = m.at(i, i);
      std::sort(w.begin(), w.end());
      return w;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = m.at(p, q);
        if (apq == 0) continue;
        double app = m.at(p, p), aqq = m.at(q, q);
        double theta = (aqq - app) / (2 * apq);
        double t = std::copysign(1.0, theta) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = m.at(i, p), aiq = m.at(i, q);
          m.at(i, p) = c * aip - s * aiq;
          m.at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = m.at(p, i), aqi = m.at(q, i);
          m.at(p, i) = c * api - s * aqi;
          m.at(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  if (off_norm() <= tol) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = m.at(i, i);
    std::sort(w.begin(), w.end());
    return w;
  }
  fail(ErrorCode::no_convergence, "Jacobi sweeps exhausted");
}

}  // namespace

SymMatrix build_spin_hamiltonian(const ChainParams& params) {
  params.validate();
  check_exact_length(params.length);
  int L = params.length;
  std::size_t dim = std::size_t{1} << L;
  SymMatrix H(static_cast<int>(dim));
  double J = params.coupling, g = params.anisotropy, h = params.field;
  for (std::size_t s = 0; s < dim; ++s) {
    int ndown = std::popcount(s);
    H.at(s, s) += -0.5 * h * (L - 2 * ndown);
    for (int l = 0; l < L; ++l) {
      int lp = (l + 1) % L;
      std::size_t t = s ^ (std::size_t{1} << l) ^ (std::size_t{1} << lp);
      bool equal_bits = ((s >> l) & 1) == ((s >> lp) & 1);
      // sigma^x sigma^x flips both bits with +1; sigma^y sigma^y with -1 on
      // equal bits and +1 on unequal bits.
      double cyy = equal_bits ? -1.0 : 1.0;
      H.at(t, s) += -J * (1 + g) / 4 - J * (1 - g) / 4 * cyy;
    }
  }
  return H;
}

std::vector<int> parity_operator(int length) {
  if (length < 1 || length > kMaxExactLength)
    fail(ErrorCode::capacity_error, "parity_operator limited to L <= 13");
  std::size_t dim = std::size_t{1} << length;
  std::vector<int> p(dim);
  for (std::size_t s = 0; s < dim; ++s)
    p[s] = std::popcount(s) % 2 == 0 ? +1 : -1;
  return p;
}

std::vector<double> diagonalize(SymMatrix m, double tol, EigMethod method,
                                int max_sweeps) {
  if (m.dim == 0) return {};
  if (method == EigMethod::automatic)
    method = m.dim <= 128 ? EigMethod::jacobi : EigMethod::lapack;
  return method == EigMethod::jacobi ? eig_jacobi(m, tol, max_sweeps)
                                     : eig_lapack(m);
}

SpinSpectrum parity_resolved_spectrum(const ChainParams& params,
                                      EigMethod method) {
  SymMatrix H = build_spin_hamiltonian(params);
  auto par = parity_operator(params.length);
  std::size_t dim = H.a.size() ? static_cast<std::size_t>(H.dim) : 0;
  std::vector<int> even_idx, odd_idx;
  for (std::size_t s = 0; s < dim; ++s)
    (par[s] > 0 ? even_idx : odd_idx).push_back(static_cast<int>(s));

  auto block = [&](const std::vector<int>& idx) {
    SymMatrix B(static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        B.at(static_cast<int>(i), static_cast<int>(j)) = H.at(idx[i], idx[j]);
    return B;
  };

  SpinSpectrum out;
  out.params = params;
  SymMatrix be = block(even_idx);
  SymMatrix bo = block(odd_idx);
  std::thread even_worker(
      [&] { out.even_levels = diagonalize(std::move(be), -1.0, method); });
  out.odd_levels = diagonalize(std::move(bo), -1.0, method);
  even_worker.join();
  out.all_levels.resize(out.even_levels.size() + out.odd_levels.size());
  std::merge(out.even_levels.begin(), out.even_levels.end(),
             out.odd_levels.begin(), out.odd_levels.end(),
             out.all_levels.begin());
  return out;
}

namespace {

bool contains_level(const std::vector<double>& sorted, double value,
                    double tol) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), value - tol);
  return it != sorted.end() && *it <= value + tol;
}

CaseResult classify_from_levels(double tol, double e_ns, double e_r,
                                double spin_gs, double spin_es,
                                bool r_ground_present) {
  CaseResult res;
  res.e_ns = e_ns;
  res.e_r = e_r;
  res.spin_gs = spin_gs;
  res.spin_es = spin_es;
  res.tol = tol;
  res.spin_gs_degenerate = spin_es - spin_gs < tol;
  res.r_ground_in_spectrum = r_ground_present;
  bool ns_is_gs = std::abs(spin_gs - e_ns) < tol;
  bool r_is_gs = std::abs(spin_gs - e_r) < tol;
  if (std::abs(e_ns - e_r) < tol && ns_is_gs && r_is_gs) {
    res.tag = res.spin_gs_degenerate ? CaseTag::case5 : CaseTag::case4;
    return res;
  }
  if (ns_is_gs && std::abs(spin_es - e_r) < tol) {
    res.tag = CaseTag::case1;
    return res;
  }
  if (r_is_gs && std::abs(spin_es - e_ns) < tol) {
    res.tag = CaseTag::case2;
    return res;
  }
  if (ns_is_gs && !r_ground_present) {
    res.tag = CaseTag::case3;
    return res;
  }
  fail(ErrorCode::unclassifiable, "no case table matched");
}

}  // namespace

CaseResult classify_case(const ChainParams& params, double tol,
                         EigMethod method) {
  ChainParams p = params;
  p.validate();
  check_exact_length(p.length);
  auto spin = parity_resolved_spectrum(p, method);
  double e_ns = sector_ground_energy(p, Sector::ns);
  double e_r = sector_ground_energy(p, Sector::r);
  bool r_present = contains_level(spin.all_levels, e_r, tol);
  return classify_from_levels(tol, e_ns, e_r, spin.all_levels[0],
                              spin.all_levels[1], r_present);
}

CaseResult classify_case_fermionic(const ChainParams& params, double tol) {
  ChainParams p = params;
  p.validate();
  double e_ns = sector_ground_energy(p, Sector::ns);
  double e_r = sector_ground_energy(p, Sector::r);
  auto lowest = physical_lowest(p, 4);
  bool r_vac_physical =
      physical_parity_filter(p, Sector::r) == ParityFilter::even;
  return classify_from_levels(tol, e_ns, e_r, lowest[0], lowest[1],
                              r_vac_physical);
}

MatchReport match_spectra(const ManyBodySpectrum& fermionic,
                          const SpinSpectrum& exact, double tol) {
  MatchReport rep;
  const std::vector<double>* blocks[3] = {&exact.even_levels,
                                          &exact.odd_levels,
                                          &exact.all_levels};
  for (int p = 0; p < 2; ++p) {
    std::vector<double> own;
    for (const auto& lv : fermionic.levels)
      if ((lv.parity > 0 ? 0 : 1) == p) own.push_back(lv.energy);
    rep.counts[p] = own.size();
    std::sort(own.begin(), own.end());
    for (int b = 0; b < 3; ++b) {
      const auto& spin = *blocks[b];
      std::size_t matched = 0;
      double maxres = 0;
      std::size_t j = 0;
      for (double e : own) {
        while (j < spin.size() && spin[j] < e - tol) ++j;
        if (j < spin.size() && std::abs(spin[j] - e) <= tol) {
          maxres = std::max(maxres, std::abs(spin[j] - e));
          ++matched;
          ++j;
        }
      }
      rep.fractions[p][b] = own.empty() ? 0.0 : double(matched) / own.size();
      rep.max_residual[p][b] = maxres;
    }
  }
  return rep;
}

RuleSelection select_parity_rule(const ChainParams& params, double tol,
                                 EigMethod method) {
  ChainParams p = params;
  p.validate();
  check_exact_length(p.length);
  auto spin = parity_resolved_spectrum(p, method);
  auto ns = enumerate_many_body(p, Sector::ns, ParityFilter::any,
                                std::uint64_t{1} << p.length);
  auto r = enumerate_many_body(p, Sector::r, ParityFilter::any,
                               std::uint64_t{1} << p.length);
  auto half = [&](const ManyBodySpectrum& mb, ParityFilter f) {
    std::vector<double> v;
    for (const auto& lv : mb.levels)
      if ((f == ParityFilter::even) == (lv.parity > 0)) v.push_back(lv.energy);
    std::sort(v.begin(), v.end());
    return v;
  };
  RuleSelection best;
  int hits = 0;
  for (ParityFilter fn : {ParityFilter::even, ParityFilter::odd}) {
    auto a = half(ns, fn);
    for (ParityFilter fr : {ParityFilter::even, ParityFilter::odd}) {
      auto b = half(r, fr);
      std::vector<double> merged(a.size() + b.size());
      std::merge(a.begin(), a.end(), b.begin(), b.end(), merged.begin());
      if (merged.size() != spin.all_levels.size()) continue;
      double dev = 0;
      for (std::size_t i = 0; i < merged.size(); ++i)
        dev = std::max(dev, std::abs(merged[i] - spin.all_levels[i]));
      if (dev >= tol) continue;
      ++hits;
      if (!best.found || dev < best.max_residual) {
        best.found = true;
        best.ns = fn;
        best.r = fr;
        best.max_residual = dev;
      }
    }
  }
  best.unique = hits == 1;
  return best;
}

}  // namespace xychain
