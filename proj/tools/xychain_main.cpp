// Batch CLI over the xychain C API: sector spectra, energy gaps, quantum
// geometry, finite-size fits, and (gamma, h) scans with CSV/JSON/SVG output.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xychain.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

bool g_json_errors = false;

int exit_code_for(xyc_status s) {
  switch (s) {
    case XYC_OK:
      return kExitOk;
    case XYC_ERR_IO:
      return kExitIo;
    case XYC_ERR_INVALID:
    case XYC_ERR_INDEX:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

int report_error(xyc_status s, const std::string& where) {
  if (g_json_errors)
    std::fprintf(stderr,
                 "{\"error\":\"%s\",\"where\":\"%s\",\"detail\":\"%s\"}\n",
                 xyc_status_name(s), where.c_str(), xyc_last_error());
  else
    std::fprintf(stderr, "error: %s (%s): %s\n", xyc_status_name(s),
                 where.c_str(), xyc_last_error());
  return exit_code_for(s);
}

#define CHECK(call)                                    \
  do {                                                 \
    xyc_status st_ = (call);                           \
    if (st_ != XYC_OK) return report_error(st_, #call); \
  } while (0)

struct GridArg {
  xyc_grid_spec spec{0, 1.6, 0, 1.6, 200, 200};
};

// "gmin:gmax:ng x hmin:hmax:nh" (no spaces), e.g. 0:1.6:200x0:1.6:200
bool parse_grid(const std::string& text, xyc_grid_spec& out) {
  auto cross = text.find('x');
  if (cross == std::string::npos) return false;
  auto parse_axis = [](const std::string& part, double& lo, double& hi,
                       int32_t& n) {
    auto c1 = part.find(':');
    auto c2 = part.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return false;
    try {
      lo = std::stod(part.substr(0, c1));
      hi = std::stod(part.substr(c1 + 1, c2 - c1 - 1));
      n = std::stoi(part.substr(c2 + 1));
    } catch (...) {
      return false;
    }
    return n >= 2 && hi > lo;
  };
  return parse_axis(text.substr(0, cross), out.gamma_min, out.gamma_max,
                    out.n_gamma) &&
         parse_axis(text.substr(cross + 1), out.h_min, out.h_max, out.n_h);
}

std::vector<int32_t> parse_lengths(const std::string& list,
                                   const std::string& range) {
  std::vector<int32_t> out;
  if (!range.empty()) {
    int lo = 0, hi = 0, step = 1;
    if (std::sscanf(range.c_str(), "%d:%d:%d", &lo, &hi, &step) < 2) return out;
    if (step < 1) step = 1;
    for (int L = lo; L <= hi; L += step) out.push_back(L);
    return out;
  }
  std::size_t pos = 0;
  while (pos < list.size()) {
    auto comma = list.find(',', pos);
    out.push_back(std::atoi(list.substr(pos, comma - pos).c_str()));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool sector_of(const std::string& name, xyc_sector& out) {
  if (name == "ns" || name == "NS") {
    out = XYC_SECTOR_NS;
    return true;
  }
  if (name == "r" || name == "R") {
    out = XYC_SECTOR_R;
    return true;
  }
  return false;
}

bool quantity_of(const std::string& name, xyc_quantity& out) {
  if (name == "delta-e") out = XYC_QUANTITY_DELTA_E;
  else if (name == "ricci-ns") out = XYC_QUANTITY_RICCI_NS;
  else if (name == "ricci-r") out = XYC_QUANTITY_RICCI_R;
  else if (name == "delta-ricci") out = XYC_QUANTITY_DELTA_RICCI;
  else return false;
  return true;
}

bool map_quantity_of(const std::string& name, xyc_map_quantity& out) {
  if (name == "ricci-r") out = XYC_MAP_RICCI_R;
  else if (name == "ricci-ns") out = XYC_MAP_RICCI_NS;
  else if (name == "ricci-product") out = XYC_MAP_RICCI_PRODUCT;
  else if (name == "delta-ricci") out = XYC_MAP_DELTA_RICCI;
  else if (name == "delta-e") out = XYC_MAP_DELTA_E;
  else return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xychain: finite XY-chain spectra, geometry, and scans"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.add_flag("--json-errors", g_json_errors, "emit errors as JSON on stderr");

  int32_t L = 8;
  double gamma = 0.5, h = 0.5, J = 1.0;
  std::string sector_name = "ns";
  std::string out_path, svg_path, zeros_path, arcs_path, format = "csv";
  std::string quantity_name = "delta-e";
  std::string grid_text = "0:1.6:200x0:1.6:200";
  std::string l_list, l_range;
  std::string model = "auto", branch = "none";
  double clamp = 1.0, tol = 1e-8;
  int32_t threads = 0;
  int32_t order = 3, n_terms = 2;

  auto add_point = [&](CLI::App* cmd, bool with_sector) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--L", L, "chain length")->required();
    cmd->add_option("--gamma", gamma, "anisotropy")->required();
    cmd->add_option("--h", h, "transverse field")->required();
    cmd->add_option("--J", J, "coupling (default 1)");
    if (with_sector)
      cmd->add_option("--sector", sector_name, "ns or r");
  };

  auto* c_spectrum = app.add_subcommand("spectrum", "single-particle spectrum");
  add_point(c_spectrum, true);
  c_spectrum->add_option("--out", out_path, "output file")->required();
  c_spectrum->add_option("--format", format, "csv or json");

  auto* c_gs = app.add_subcommand("gs-energy", "sector ground-state energies");
  add_point(c_gs, false);
  c_gs->add_option("--out", out_path, "optional JSON output");

  auto* c_de = app.add_subcommand("delta-e", "NS-R gap, single L or a series");
  c_de->set_help_flag("--help", "print help");
  c_de->add_option("--gamma", gamma)->required();
  c_de->add_option("--h", h)->required();
  c_de->add_option("--L", L, "single length");
  c_de->add_option("--L-list", l_list, "comma-separated lengths");
  c_de->add_option("--L-range", l_range, "lo:hi[:step]");
  c_de->add_option("--out", out_path, "series output (csv/json by --format)");
  c_de->add_option("--format", format, "csv or json");

  auto* c_qgt = app.add_subcommand("qgt", "quantum geometric tensor point");
  add_point(c_qgt, true);
  c_qgt->add_option("--out", out_path, "optional JSON output");

  auto* c_ricci = app.add_subcommand("ricci", "curvature at a point");
  add_point(c_ricci, true);
  c_ricci->add_option("--out", out_path, "optional JSON output");

  auto* c_fit = app.add_subcommand("fit", "decay-law fit of a size series");
  c_fit->set_help_flag("--help", "print help");
  c_fit->add_option("--quantity", quantity_name,
                    "delta-e|ricci-ns|ricci-r|delta-ricci");
  c_fit->add_option("--gamma", gamma)->required();
  c_fit->add_option("--h", h)->required();
  c_fit->add_option("--L-list", l_list, "comma-separated lengths");
  c_fit->add_option("--L-range", l_range, "lo:hi[:step]")->required();
  c_fit->add_option("--model", model,
                    "auto|exponential|powerlaw|biexponential");
  c_fit->add_option("--branch-rule", branch, "mod4|mod2 (biexponential)");
  c_fit->add_option("--out", out_path, "optional JSON output");

  auto* c_em = app.add_subcommand("em-compare",
                                  "exact gap vs Euler-Maclaurin forms at h=1");
  c_em->set_help_flag("--help", "print help");
  c_em->add_option("--gamma", gamma)->required();
  c_em->add_option("--L-list", l_list, "comma-separated lengths")->required();
  c_em->add_option("--order", order, "closed-form order: 1 or 3");
  c_em->add_option("--n-terms", n_terms, "Bernoulli terms for the general form");
  c_em->add_option("--out", out_path, "CSV output");

  auto* c_phase = app.add_subcommand("scan-phase", "case-label map");
  c_phase->set_help_flag("--help", "print help");
  c_phase->add_option("--L", L)->required();
  c_phase->add_option("--grid", grid_text, "gmin:gmax:ng x hmin:hmax:nh");
  c_phase->add_option("--out", out_path, "cases CSV/JSON")->required();
  c_phase->add_option("--format", format, "csv or json");
  c_phase->add_option("--arcs", arcs_path, "arc-fit CSV from case boundaries");
  c_phase->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* c_sign = app.add_subcommand("scan-sign", "curvature sign map");
  c_sign->set_help_flag("--help", "print help");
  c_sign->add_option("--L", L)->required();
  c_sign->add_option("--quantity", quantity_name,
                     "ricci-r|ricci-ns|ricci-product|delta-ricci|delta-e");
  c_sign->add_option("--grid", grid_text, "gmin:gmax:ng x hmin:hmax:nh");
  c_sign->add_option("--clamp", clamp, "export clamp delta (default 1)");
  c_sign->add_option("--out", out_path, "map CSV/JSON")->required();
  c_sign->add_option("--format", format, "csv or json");
  c_sign->add_option("--svg", svg_path, "SVG heatmap path");
  c_sign->add_option("--zeros", zeros_path, "zero-crossing CSV path");
  c_sign->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* c_oracle = app.add_subcommand(
      "oracle-check", "fermionic vs exact-diagonalization match report");
  add_point(c_oracle, false);
  c_oracle->add_option("--tol", tol, "match tolerance");
  c_oracle->add_option("--out", out_path, "optional JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (std::getenv("XYCHAIN_THREADS")) threads = 0;  // env wins over --threads

  xyc_params params{L, J, gamma, h};
  xyc_sector sector = XYC_SECTOR_NS;
  if (!sector_of(sector_name, sector))
    return report_error(XYC_ERR_INVALID, "--sector");
  int as_json = format == "json";

  if (c_spectrum->parsed()) {
    xyc_spectrum* s = nullptr;
    CHECK(xyc_spectrum_compute(&params, sector, &s));
    xyc_status st = xyc_spectrum_write(s, out_path.c_str(), as_json);
    xyc_spectrum_free(s);
    if (st != XYC_OK) return report_error(st, "write");
    std::printf("spectrum L=%d gamma=%g h=%g sector=%s -> %s\n", L, gamma, h,
                sector_name.c_str(), out_path.c_str());
    return kExitOk;
  }

  if (c_gs->parsed()) {
    double e_ns = 0, e_r = 0, d = 0;
    CHECK(xyc_ground_energy(&params, XYC_SECTOR_NS, &e_ns));
    CHECK(xyc_ground_energy(&params, XYC_SECTOR_R, &e_r));
    CHECK(xyc_delta_gs(&params, &d));
    char json[256];
    std::snprintf(json, sizeof json,
                  "{\"L\":%d,\"gamma\":%.17g,\"h\":%.17g,\"e_ns\":%.17g,"
                  "\"e_r\":%.17g,\"delta\":%.17g}\n",
                  L, gamma, h, e_ns, e_r, d);
    if (!out_path.empty()) {
      FILE* f = std::fopen(out_path.c_str(), "wb");
      if (!f) return report_error(XYC_ERR_IO, out_path);
      std::fputs(json, f);
      std::fclose(f);
    }
    std::printf("gs-energy L=%d gamma=%g h=%g: E_NS=%.15g E_R=%.15g dE=%.15g\n",
                L, gamma, h, e_ns, e_r, d);
    return kExitOk;
  }

  if (c_de->parsed()) {
    std::vector<int32_t> lengths = parse_lengths(l_list, l_range);
    if (lengths.empty()) {
      double d = 0;
      CHECK(xyc_delta_gs(&params, &d));
      std::printf("delta-e L=%d gamma=%g h=%g: %.15g\n", L, gamma, h, d);
      return kExitOk;
    }
    xyc_series* s = nullptr;
    CHECK(xyc_series_build(XYC_QUANTITY_DELTA_E, gamma, h, lengths.data(),
                           lengths.size(), &s));
    xyc_status st = out_path.empty()
                        ? XYC_OK
                        : xyc_series_write(s, out_path.c_str(), as_json);
    xyc_series_free(s);
    if (st != XYC_OK) return report_error(st, "write");
    std::printf("delta-e series gamma=%g h=%g n=%zu -> %s\n", gamma, h,
                lengths.size(), out_path.empty() ? "(stdout only)" : out_path.c_str());
    return kExitOk;
  }

  if (c_qgt->parsed()) {
    xyc_qgt_point q{};
    CHECK(xyc_qgt(&params, sector, &q));
    if (q.singular) return report_error(XYC_ERR_SINGULAR, "qgt point");
    std::printf("qgt L=%d gamma=%g h=%g %s: g_hh=%.15g g_gg=%.15g g_hg=%.15g\n",
                L, gamma, h, sector_name.c_str(), q.q_hh, q.q_gg, q.q_hg);
    if (!out_path.empty()) {
      char json[256];
      std::snprintf(json, sizeof json,
                    "{\"q_hh\":%.17g,\"q_gg\":%.17g,\"q_hg\":%.17g,"
                    "\"omega_hg\":0}\n",
                    q.q_hh, q.q_gg, q.q_hg);
      FILE* f = std::fopen(out_path.c_str(), "wb");
      if (!f) return report_error(XYC_ERR_IO, out_path);
      std::fputs(json, f);
      std::fclose(f);
    }
    return kExitOk;
  }

  if (c_ricci->parsed()) {
    xyc_ricci_result r{};
    CHECK(xyc_ricci(&params, sector, &r));
    if (r.singular) return report_error(XYC_ERR_SINGULAR, "ricci point");
    std::printf(
        "ricci L=%d gamma=%g h=%g %s: det=%.15g christoffel=%.15g "
        "discrepancy=%.15g\n",
        L, gamma, h, sector_name.c_str(), r.r_det, r.r_christoffel,
        r.discrepancy);
    if (!out_path.empty()) {
      char json[256];
      std::snprintf(json, sizeof json,
                    "{\"r_det\":%.17g,\"r_christoffel\":%.17g,"
                    "\"discrepancy\":%.17g}\n",
                    r.r_det, r.r_christoffel, r.discrepancy);
      FILE* f = std::fopen(out_path.c_str(), "wb");
      if (!f) return report_error(XYC_ERR_IO, out_path);
      std::fputs(json, f);
      std::fclose(f);
    }
    return kExitOk;
  }

  if (c_fit->parsed()) {
    xyc_quantity q = XYC_QUANTITY_DELTA_E;
    if (!quantity_of(quantity_name, q))
      return report_error(XYC_ERR_INVALID, "--quantity");
    std::vector<int32_t> lengths = parse_lengths(l_list, l_range);
    if (lengths.empty()) return report_error(XYC_ERR_INVALID, "--L-range");
    xyc_series* s = nullptr;
    CHECK(xyc_series_build(q, gamma, h, lengths.data(), lengths.size(), &s));
    int32_t model_id = model == "auto"            ? 0
                       : model == "exponential"   ? 1
                       : model == "powerlaw"      ? 2
                       : model == "biexponential" ? 3
                                                  : -1;
    int32_t branch_id = branch == "mod4" ? 1 : branch == "mod2" ? 2 : 0;
    if (model_id < 0) {
      xyc_series_free(s);
      return report_error(XYC_ERR_INVALID, "--model");
    }
    char* json = nullptr;
    xyc_status st = xyc_fit(s, model_id, branch_id, &json);
    xyc_series_free(s);
    if (st != XYC_OK) return report_error(st, "fit");
    std::fputs(json, stdout);
    if (!out_path.empty()) {
      FILE* f = std::fopen(out_path.c_str(), "wb");
      if (!f) {
        xyc_string_free(json);
        return report_error(XYC_ERR_IO, out_path);
      }
      std::fputs(json, f);
      std::fclose(f);
    }
    xyc_string_free(json);
    return kExitOk;
  }

  if (c_em->parsed()) {
    std::vector<int32_t> lengths = parse_lengths(l_list, "");
    if (lengths.empty()) return report_error(XYC_ERR_INVALID, "--L-list");
    std::string csv = "# xychain-geom v1\nL,exact,em_closed,em_general\n";
    for (int32_t Li : lengths) {
      xyc_params p{Li, J, gamma, 1.0};
      double exact = 0, closed = 0, general = 0;
      CHECK(xyc_delta_gs(&p, &exact));
      CHECK(xyc_em_delta_gs(gamma, Li, order, &closed));
      CHECK(xyc_em_general(&p, n_terms, &general));
      char line[160];
      std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", Li, exact,
                    closed, general);
      csv += line;
      std::printf("em-compare L=%d exact=%.6e closed=%.6e general=%.6e\n", Li,
                  exact, closed, general);
    }
    if (!out_path.empty()) {
      FILE* f = std::fopen(out_path.c_str(), "wb");
      if (!f) return report_error(XYC_ERR_IO, out_path);
      std::fputs(csv.c_str(), f);
      std::fclose(f);
    }
    return kExitOk;
  }

  if (c_phase->parsed()) {
    xyc_grid_spec grid{};
    if (!parse_grid(grid_text, grid))
      return report_error(XYC_ERR_INVALID, "--grid");
    xyc_casemap* m = nullptr;
    CHECK(xyc_scan_cases(&grid, L, threads, &m));
    xyc_status st = xyc_casemap_write(m, out_path.c_str(), as_json);
    int32_t count = -1;
    if (st == XYC_OK && !arcs_path.empty())
      st = xyc_casemap_arcs(m, arcs_path.c_str(), &count);
    xyc_casemap_free(m);
    if (st != XYC_OK) return report_error(st, "scan-phase output");
    if (count >= 0)
      std::printf("scan-phase L=%d %dx%d -> %s (arcs: %d -> %s)\n", L,
                  grid.n_gamma, grid.n_h, out_path.c_str(), count,
                  arcs_path.c_str());
    else
      std::printf("scan-phase L=%d %dx%d -> %s\n", L, grid.n_gamma, grid.n_h,
                  out_path.c_str());
    return kExitOk;
  }

  if (c_sign->parsed()) {
    xyc_grid_spec grid{};
    if (!parse_grid(grid_text, grid))
      return report_error(XYC_ERR_INVALID, "--grid");
    xyc_map_quantity q = XYC_MAP_RICCI_R;
    if (!map_quantity_of(quantity_name, q))
      return report_error(XYC_ERR_INVALID, "--quantity");
    xyc_signmap* m = nullptr;
    CHECK(xyc_scan_sign(&grid, L, q, clamp, threads, &m));
    xyc_status st = xyc_signmap_write(m, out_path.c_str(), as_json);
    if (st == XYC_OK && !svg_path.empty())
      st = xyc_signmap_write_svg(m, svg_path.c_str());
    int32_t curves = 0;
    if (st == XYC_OK && !zeros_path.empty())
      st = xyc_signmap_zero_curves(m, zeros_path.c_str(), &curves);
    xyc_signmap_free(m);
    if (st != XYC_OK) return report_error(st, "scan-sign output");
    std::printf("scan-sign L=%d quantity=%s %dx%d -> %s\n", L,
                quantity_name.c_str(), grid.n_gamma, grid.n_h,
                out_path.c_str());
    return kExitOk;
  }

  if (c_oracle->parsed()) {
    char* json = nullptr;
    CHECK(xyc_oracle_report(&params, tol, &json));
    std::fputs(json, stdout);
    if (!out_path.empty()) {
      FILE* f = std::fopen(out_path.c_str(), "wb");
      if (!f) {
        xyc_string_free(json);
        return report_error(XYC_ERR_IO, out_path);
      }
      std::fputs(json, f);
      std::fclose(f);
    }
    xyc_string_free(json);
    return kExitOk;
  }

  return kExitUsage;
}
