#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "xychain/io.hpp"

using namespace xychain;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

SignMap tiny_map() {
  SignMap m;
  m.grid = Grid(0.05, 1.55, 2, 0.05, 0.85, 2);
  m.quantity = MapQuantity::ricci_r;
  m.length = 10;
  m.clamp = 1.0;
  m.raw = {0.5, -2.0, 0.0, 0.25};
  m.clamped = {0.5, -1.0, 0.0, 0.25};
  m.sign = {1, -1, 0, 1};
  m.singular = {0, 0, 1, 0};
  return m;
}

}  // namespace

TEST_CASE("doubles serialize at full round-trip precision") {
  for (double v : {0.1, 1.0 / 3, 6.283185307179586, -2.5e-17, 1e300}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CSV carries the version line and re-parses") {
  ChainParams p{4, 1.0, 0.5, 0.5};
  auto spec = single_particle_spectrum(p, Sector::r);
  std::string csv = spectrum_csv(spec);
  CHECK(csv.rfind(kCsvVersionLine, 0) == 0);
  CsvTable t = parse_csv(csv);
  REQUIRE(t.header.size() == 4);
  CHECK(t.header[0] == "k");
  CHECK(t.header[3] == "theta");
  REQUIRE(t.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.rows[i][0] == i + 1);
    CHECK(t.rows[i][1] == spec.phase[i]);   // bit-exact round trip
    CHECK(t.rows[i][2] == spec.energy[i]);
  }
}

TEST_CASE("JSON twins carry the same field names and values") {
  ChainParams p{4, 1.0, 0.5, 0.5};
  auto spec = single_particle_spectrum(p, Sector::r);
  auto j = nlohmann::json::parse(spectrum_json(spec));
  REQUIRE(j["rows"].size() == 4);
  CHECK(j["rows"][0].contains("k"));
  CHECK(j["rows"][0].contains("phi"));
  CHECK(j["rows"][0].contains("epsilon"));
  CHECK(j["rows"][0].contains("theta"));
  CHECK(j["rows"][2]["epsilon"].get<double>() == spec.energy[2]);

  SignMap m = tiny_map();
  auto jm = nlohmann::json::parse(signmap_json(m));
  CHECK(jm["rows"][0].contains("gamma"));
  CHECK(jm["rows"][0].contains("raw"));
  CHECK(jm["rows"][0].contains("clamped"));
  CHECK(jm["rows"][0].contains("sign"));
  CHECK(jm["rows"][0].contains("singular"));
}

TEST_CASE("sign map CSV round trip") {
  SignMap m = tiny_map();
  CsvTable t = parse_csv(signmap_csv(m));
  REQUIRE(t.rows.size() == 4);
  CHECK(t.header == std::vector<std::string>{"gamma", "h", "raw", "clamped",
                                             "sign", "singular"});
  CHECK(t.rows[1][2] == -2.0);
  CHECK(t.rows[1][3] == -1.0);
  CHECK(t.rows[2][5] == 1.0);
}

TEST_CASE("atomic write leaves no temp file and is byte stable") {
  auto dir = std::filesystem::temp_directory_path() / "xychain_io_test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "out.csv").string();
  SignMap m = tiny_map();
  atomic_write(path, signmap_csv(m));
  std::string first = slurp(path);
  atomic_write(path, signmap_csv(m));
  CHECK(first == slurp(path));
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(atomic_write((dir / "missing" / "x.csv").string(), "x"),
                  Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("SVG heatmap: cells, white singulars, determinism") {
  SignMap m = tiny_map();
  std::string svg = signmap_svg(m);
  CHECK(svg == signmap_svg(m));
  // three coloured cells (the sign-0/singular cell stays background white)
  std::size_t rects = 0, pos = 0;
  while ((pos = svg.find("<rect", pos)) != std::string::npos) {
    ++rects;
    pos += 5;
  }
  CHECK(rects == 1 + 3);  // background + coloured cells
  CHECK(svg.find("rgb(") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("large SVG stays under the size budget") {
  SignMap m;
  m.grid = Grid(0.004, 1.6, 200, 0.004, 1.6, 200);
  m.quantity = MapQuantity::delta_ricci;
  m.length = 10;
  m.clamp = 1.0;
  m.raw.resize(m.grid.size());
  m.clamped.resize(m.grid.size());
  m.sign.resize(m.grid.size());
  m.singular.assign(m.grid.size(), 0);
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    double v = std::sin(0.37 * double(i)) * 2;
    m.raw[i] = v;
    m.clamped[i] = std::clamp(v, -1.0, 1.0);
    m.sign[i] = v > 0 ? 1 : -1;
  }
  std::string svg = signmap_svg(m);
  CHECK(svg.size() < 5u * 1024 * 1024);
}

TEST_CASE("series and arcs tables") {
  SizeSeries s;
  s.quantity = Quantity::delta_e;
  s.gamma = 0.5;
  s.h = 0.5;
  s.samples = {{8, -0.125, -1, true, ""}, {12, 0.0625, 1, true, ""}};
  CsvTable t = parse_csv(series_csv(s));
  CHECK(t.header == std::vector<std::string>{"L", "value", "sign"});
  CHECK(t.rows[0][1] == -0.125);
  CHECK(t.rows[1][2] == 1.0);

  ArcSet arcs;
  arcs.arcs = {{1, 0.25, 0.001, 40, true}, {2, 1.0, 0.002, 90, true}};
  arcs.accepted = 2;
  CsvTable ta = parse_csv(arcs_csv(arcs));
  CHECK(ta.header ==
        std::vector<std::string>{"index", "h0", "residual", "n_points"});
  CHECK(ta.rows[1][1] == 1.0);
}
