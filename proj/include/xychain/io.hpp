#pragma once

#include <string>
#include <vector>

#include "xychain/exact.hpp"
#include "xychain/geometry.hpp"
#include "xychain/scan.hpp"
#include "xychain/scaling.hpp"
#include "xychain/spectrum.hpp"

namespace xychain {

inline constexpr const char* kCsvVersionLine = "# xychain-geom v1";

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Write-temp-then-rename; fails with IoError.
void atomic_write(const std::string& path, const std::string& content);

std::string spectrum_csv(const SingleParticleSpectrum& s);
std::string spectrum_json(const SingleParticleSpectrum& s);
std::string series_csv(const SizeSeries& s);
std::string series_json(const SizeSeries& s);
std::string signmap_csv(const SignMap& m);
std::string signmap_json(const SignMap& m);
std::string cases_csv(const CaseMap& m);
std::string cases_json(const CaseMap& m);
std::string arcs_csv(const ArcSet& arcs);
std::string arcs_json(const ArcSet& arcs);
std::string curves_csv(const std::vector<ZeroCurve>& curves);
std::string match_report_json(const ChainParams& params,
                              const RuleSelection& rule,
                              const MatchReport& ns_report,
                              const MatchReport& r_report,
                              const CaseResult& case_result);
std::string fit_json(const SizeSeries& series, const FitResult& fit);
std::string qgt_json(const QgtPoint& q);
std::string ricci_json(const ChainParams& p, Sector sector,
                       const RicciResult& r);

// Standalone deterministic heatmap: diverging two-colour cells by clamped
// value, white at sign 0 / singular, axis ticks every 0.5.
std::string signmap_svg(const SignMap& m);

// Minimal CSV reader for round-trip checks: skips the version line, returns
// header names and numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& content);

}  // namespace xychain
