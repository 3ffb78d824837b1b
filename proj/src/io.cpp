#include "xychain/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "xychain/geometry.hpp"

namespace xychain {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::io_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::io_error, "cannot rename into " + path);
  }
}

namespace {

json params_json(const ChainParams& p) {
  return json{{"L", p.length},
              {"J", p.coupling},
              {"gamma", p.anisotropy},
              {"h", p.field}};
}

std::string csv_head(const std::string& columns) {
  std::string out(kCsvVersionLine);
  out += '\n';
  out += columns;
  out += '\n';
  return out;
}

}  // namespace

std::string spectrum_csv(const SingleParticleSpectrum& s) {
  std::string out = csv_head("k,phi,epsilon,theta");
  for (std::size_t i = 0; i < s.phase.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(s.phase[i]);
    out += ',';
    out += format_double(s.energy[i]);
    out += ',';
    out += format_double(s.angle[i]);
    out += '\n';
  }
  return out;
}

std::string spectrum_json(const SingleParticleSpectrum& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.phase.size(); ++i)
    rows.push_back(json{{"k", i + 1},
                        {"phi", s.phase[i]},
                        {"epsilon", s.energy[i]},
                        {"theta", s.angle[i]}});
  json j{{"params", params_json(s.params)},
         {"sector", sector_name(s.sector)},
         {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string series_csv(const SizeSeries& s) {
  std::string out = csv_head("L,value,sign");
  for (const auto& p : s.samples) {
    out += std::to_string(p.length);
    out += ',';
    out += format_double(p.value);
    out += ',';
    out += std::to_string(p.sign);
    out += '\n';
  }
  return out;
}

std::string series_json(const SizeSeries& s) {
  json rows = json::array();
  for (const auto& p : s.samples)
    rows.push_back(json{{"L", p.length},
                        {"value", p.value},
                        {"sign", p.sign},
                        {"valid", p.valid},
                        {"flag", p.flag}});
  json j{{"quantity", quantity_name(s.quantity)},
         {"gamma", s.gamma},
         {"h", s.h},
         {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string signmap_csv(const SignMap& m) {
  std::string out = csv_head("gamma,h,raw,clamped,sign,singular");
  for (int i = 0; i < m.grid.n_gamma; ++i)
    for (int j = 0; j < m.grid.n_h; ++j) {
      std::size_t idx = m.grid.index(i, j);
      out += format_double(m.grid.gamma_at(i));
      out += ',';
      out += format_double(m.grid.h_at(j));
      out += ',';
      out += format_double(m.raw[idx]);
      out += ',';
      out += format_double(m.clamped[idx]);
      out += ',';
      out += std::to_string(int(m.sign[idx]));
      out += ',';
      out += std::to_string(int(m.singular[idx]));
      out += '\n';
    }
  return out;
}

std::string signmap_json(const SignMap& m) {
  json rows = json::array();
  for (int i = 0; i < m.grid.n_gamma; ++i)
    for (int j = 0; j < m.grid.n_h; ++j) {
      std::size_t idx = m.grid.index(i, j);
      rows.push_back(json{{"gamma", m.grid.gamma_at(i)},
                          {"h", m.grid.h_at(j)},
                          {"raw", m.raw[idx]},
                          {"clamped", m.clamped[idx]},
                          {"sign", int(m.sign[idx])},
                          {"singular", int(m.singular[idx])}});
    }
  json j{{"quantity", map_quantity_name(m.quantity)},
         {"L", m.length},
         {"clamp", m.clamp},
         {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string cases_csv(const CaseMap& m) {
  std::string out = csv_head("gamma,h,case");
  for (int i = 0; i < m.grid.n_gamma; ++i)
    for (int j = 0; j < m.grid.n_h; ++j) {
      out += format_double(m.grid.gamma_at(i));
      out += ',';
      out += format_double(m.grid.h_at(j));
      out += ',';
      out += std::to_string(int(m.cases[m.grid.index(i, j)]));
      out += '\n';
    }
  return out;
}

std::string cases_json(const CaseMap& m) {
  json rows = json::array();
  for (int i = 0; i < m.grid.n_gamma; ++i)
    for (int j = 0; j < m.grid.n_h; ++j)
      rows.push_back(json{{"gamma", m.grid.gamma_at(i)},
                          {"h", m.grid.h_at(j)},
                          {"case", int(m.cases[m.grid.index(i, j)])}});
  json j{{"L", m.length}, {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string arcs_csv(const ArcSet& arcs) {
  std::string out = csv_head("index,h0,residual,n_points");
  for (const auto& a : arcs.arcs) {
    out += std::to_string(a.index);
    out += ',';
    out += format_double(a.h0);
    out += ',';
    out += format_double(a.rms);
    out += ',';
    out += std::to_string(a.n_points);
    out += '\n';
  }
  return out;
}

std::string arcs_json(const ArcSet& arcs) {
  json rows = json::array();
  for (const auto& a : arcs.arcs)
    rows.push_back(json{{"index", a.index},
                        {"h0", a.h0},
                        {"residual", a.rms},
                        {"n_points", a.n_points},
                        {"elliptic", a.elliptic}});
  json j{{"accepted", arcs.accepted}, {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string curves_csv(const std::vector<ZeroCurve>& curves) {
  std::string out = csv_head("curve,gamma,h");
  for (std::size_t c = 0; c < curves.size(); ++c)
    for (auto [g, h] : curves[c].points) {
      out += std::to_string(c);
      out += ',';
      out += format_double(g);
      out += ',';
      out += format_double(h);
      out += '\n';
    }
  return out;
}

namespace {

json match_json(const MatchReport& r) {
  json out;
  const char* parities[2] = {"even", "odd"};
  const char* blocks[3] = {"spin_even", "spin_odd", "spin_all"};
  for (int p = 0; p < 2; ++p) {
    json row{{"levels", r.counts[p]}};
    for (int b = 0; b < 3; ++b) {
      row[std::string("fraction_") + blocks[b]] = r.fractions[p][b];
      row[std::string("max_residual_") + blocks[b]] = r.max_residual[p][b];
    }
    out[parities[p]] = row;
  }
  return out;
}

const char* filter_name(ParityFilter f) {
  switch (f) {
    case ParityFilter::any: return "any";
    case ParityFilter::even: return "even";
    case ParityFilter::odd: return "odd";
  }
  return "?";
}

}  // namespace

std::string match_report_json(const ChainParams& params,
                              const RuleSelection& rule,
                              const MatchReport& ns_report,
                              const MatchReport& r_report,
                              const CaseResult& case_result) {
  json j{{"params", params_json(params)},
         {"rule",
          json{{"found", rule.found},
               {"unique", rule.unique},
               {"ns_parity", filter_name(rule.ns)},
               {"r_parity", filter_name(rule.r)},
               {"max_residual", rule.max_residual}}},
         {"match_ns", match_json(ns_report)},
         {"match_r", match_json(r_report)},
         {"case",
          json{{"tag", int(case_result.tag)},
               {"e_ns", case_result.e_ns},
               {"e_r", case_result.e_r},
               {"spin_gs", case_result.spin_gs},
               {"spin_es", case_result.spin_es},
               {"degenerate", case_result.spin_gs_degenerate},
               {"r_ground_in_spectrum", case_result.r_ground_in_spectrum}}}};
  return j.dump(2) + "\n";
}

std::string fit_json(const SizeSeries& series, const FitResult& fit) {
  json j{{"quantity", quantity_name(series.quantity)},
         {"gamma", series.gamma},
         {"h", series.h},
         {"model", fit_model_name(fit.model)},
         {"exponent", fit.exponent},
         {"prefactor", fit.prefactor},
         {"r_squared", fit.r_squared},
         {"window", json::array({fit.window_min, fit.window_max})},
         {"n_used", fit.n_used},
         {"zero_series", fit.zero_series}};
  if (fit.model == FitModel::biexponential) {
    j["beta_upper"] = fit.beta_upper;
    j["beta_lower"] = fit.beta_lower;
    j["r2_upper"] = fit.r2_upper;
    j["r2_lower"] = fit.r2_lower;
    j["sign_pattern_ok"] = fit.sign_pattern_ok;
    j["branch_rule"] = fit.branch_rule == BranchRule::mod4 ? "mod4" : "mod2";
  }
  return j.dump(2) + "\n";
}

std::string qgt_json(const QgtPoint& q) {
  json j{{"params", params_json(q.params)},
         {"sector", sector_name(q.sector)},
         {"q_hh", q.q_hh},
         {"q_gg", q.q_gg},
         {"q_hg", q.q_hg},
         {"omega_hg", q.omega_hg},
         {"singular", q.singular},
         {"singular_mode", q.singular_mode}};
  return j.dump(2) + "\n";
}

std::string ricci_json(const ChainParams& p, Sector sector,
                       const RicciResult& r) {
  json j{{"params", params_json(p)},
         {"sector", sector_name(sector)},
         {"r_det", r.r_det},
         {"r_det_noise", r.r_det_noise},
         {"r_christoffel", r.r_christoffel},
         {"discrepancy", r.discrepancy},
         {"singular", r.singular}};
  return j.dump(2) + "\n";
}

std::string signmap_svg(const SignMap& m) {
  const int cell = 4;
  const int margin = 40;
  int w = m.grid.n_gamma * cell + 2 * margin;
  int hgt = m.grid.n_h * cell + 2 * margin;
  std::string out;
  out.reserve(m.grid.size() * 64 + 4096);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(hgt) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < m.grid.n_gamma; ++i) {
    for (int j = 0; j < m.grid.n_h; ++j) {
      std::size_t idx = m.grid.index(i, j);
      int r = 255, g = 255, b = 255;
      if (!m.singular[idx] && m.sign[idx] != 0) {
        double t = std::abs(m.clamped[idx]) / m.clamp;
        if (t > 1) t = 1;
        if (m.clamped[idx] > 0) {  // white -> red
          r = 255 - int(t * (255 - 178));
          g = 255 - int(t * (255 - 24));
          b = 255 - int(t * (255 - 43));
        } else {  // white -> blue
          r = 255 - int(t * (255 - 33));
          g = 255 - int(t * (255 - 102));
          b = 255 - int(t * (255 - 172));
        }
      }
      if (r == 255 && g == 255 && b == 255) continue;  // background
      int x = margin + i * cell;
      int y = hgt - margin - (j + 1) * cell;
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
             "\" width=\"" + std::to_string(cell) + "\" height=\"" +
             std::to_string(cell) + "\" fill=\"rgb(" + std::to_string(r) +
             "," + std::to_string(g) + "," + std::to_string(b) + ")\"/>\n";
    }
  }
  // axis ticks every 0.5 data units
  auto x_of = [&](double gamma) {
    return margin + (gamma - m.grid.gamma_min) /
                        (m.grid.gamma_max - m.grid.gamma_min) *
                        (m.grid.n_gamma * cell);
  };
  auto y_of = [&](double h) {
    return hgt - margin - (h - m.grid.h_min) / (m.grid.h_max - m.grid.h_min) *
                              (m.grid.n_h * cell);
  };
  out += "<g stroke=\"black\" font-size=\"10\" font-family=\"monospace\">\n";
  for (double t = std::ceil(m.grid.gamma_min * 2) / 2; t <= m.grid.gamma_max;
       t += 0.5) {
    int x = int(x_of(t));
    out += "<line x1=\"" + std::to_string(x) + "\" y1=\"" +
           std::to_string(hgt - margin) + "\" x2=\"" + std::to_string(x) +
           "\" y2=\"" + std::to_string(hgt - margin + 5) + "\"/>\n";
    out += "<text x=\"" + std::to_string(x - 8) + "\" y=\"" +
           std::to_string(hgt - margin + 16) + "\" stroke=\"none\">" +
           format_double(t) + "</text>\n";
  }
  for (double t = std::ceil(m.grid.h_min * 2) / 2; t <= m.grid.h_max;
       t += 0.5) {
    int y = int(y_of(t));
    out += "<line x1=\"" + std::to_string(margin - 5) + "\" y1=\"" +
           std::to_string(y) + "\" x2=\"" + std::to_string(margin) +
           "\" y2=\"" + std::to_string(y) + "\"/>\n";
    out += "<text x=\"" + std::to_string(margin - 32) + "\" y=\"" +
           std::to_string(y + 4) + "\" stroke=\"none\">" + format_double(t) +
           "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

CsvTable parse_csv(const std::string& content) {
  CsvTable table;
  std::istringstream in(content);
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!header_done) {
      table.header = cells;
      header_done = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      double v = 0;
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{})
        fail(ErrorCode::io_error, "bad CSV number: " + c);
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace xychain
