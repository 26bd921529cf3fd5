#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "optopix/config.hpp"
#include "optopix/io.hpp"
#include "optopix/param_fit.hpp"
#include "support.hpp"

using namespace optopix;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("optopix_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
  }
};

}  // namespace

TEST_CASE("shipped presets load") {
  for (const char* name : {"paper_pixel_w020", "paper_pixel_w025", "paper_pixel_w040",
                           "paper_pixel_w055", "paper_pixel_w075", "tau23_pixel"}) {
    CAPTURE(name);
    const PixelConfig c = load_pixel_config(name);
    CHECK(c.sources.size() == 3);
    CHECK(c.compliance_scale > 1.0);
    CHECK(c.network().r_abs() > 0.0);
  }
  CHECK(load_material("pgs").density == 1962.0);
  CHECK(load_material("ecoflex0010").youngs_modulus.value() == 50e3);
}

TEST_CASE("presets reproduce the measured bridge resistances") {
  const std::pair<const char*, double> rows[] = {{"paper_pixel_w020", 382.0},
                                                 {"paper_pixel_w025", 269.0},
                                                 {"paper_pixel_w040", 184.0},
                                                 {"paper_pixel_w055", 145.0},
                                                 {"paper_pixel_w075", 95.0}};
  for (const auto& [name, r] : rows) {
    CHECK(testing::rel(load_pixel_config(name).network().r_abs(), r) < 1e-6);
  }
}

TEST_CASE("strict config parsing") {
  CHECK(testing::error_code([] { parse_pixel_config("{\"geometry\": {\"radius\": 1}}"); }) ==
        "invalid-config");
  CHECK(testing::error_code([] { parse_pixel_config("{\"extra\": 1}"); }) == "invalid-config");
  CHECK(testing::error_code([] { parse_pixel_config("{\"geometry\": "); }) == "malformed-json");
  CHECK(testing::error_code([] { parse_pixel_config("{\"optics\": {\"incident_power\": \"2\"}}"); }) ==
        "invalid-config");
  CHECK(testing::error_code([] { parse_pixel_config("{\"geometry\": {\"cavity_height\": -1}}"); }) ==
        "invalid-geometry");
  CHECK(testing::error_code([] { load_pixel_config("no_such_preset_here"); }) == "config-not-found");
  const PixelConfig empty = parse_pixel_config("{}");
  CHECK(empty.geometry.bridge_width == PixelGeometry{}.bridge_width);
}

TEST_CASE("material overrides and lookup directory") {
  TempDir dir;
  dir.write("dense.json", R"({"preset": "pgs", "name": "dense", "density": 2130})");
  dir.write("pix.json", R"({"materials": {"absorber": "dense", "compliance_scale": 2.5}})");
  const PixelConfig c = load_pixel_config((dir.path / "pix.json").string());
  CHECK(c.absorber.density == 2130.0);
  CHECK(c.absorber.specific_heat == MaterialProperties::pgs().specific_heat);
  CHECK(c.compliance_scale == 2.5);
  CHECK(c.sources.size() == 3);

  ::setenv("OPTOPIX_CONFIG_DIR", dir.path.c_str(), 1);
  CHECK(load_pixel_config("pix").absorber.name == "dense");
  CHECK(resolve_preset("pix") == dir.path / "pix.json");
  ::unsetenv("OPTOPIX_CONFIG_DIR");
  CHECK(testing::error_code([] { load_pixel_config("pix"); }) == "config-not-found");
}

TEST_CASE("config round trip") {
  PixelConfig c = load_pixel_config("paper_pixel_w040");
  c.pressure_model = PressureModel::finite_volume;
  const PixelConfig back = parse_pixel_config(pixel_config_to_json(c));
  CHECK(back.network().r_abs() == c.network().r_abs());
  CHECK(back.network().c_air() == c.network().c_air());
  CHECK(back.compliance_scale == c.compliance_scale);
  CHECK(back.pressure_model == PressureModel::finite_volume);
}

TEST_CASE("pattern files") {
  const std::string text = R"({
    "layout": {"rows": 2, "cols": 3, "pitch_m": 0.004, "mask": [[1, 1, 0], [1, 1, 1]]},
    "events": [
      {"pixel": [1, 2], "t0_s": 0.0, "train": {"P_W": 2.0, "tp_s": 0.02, "tg_s": 0.02, "n": 3}},
      {"pixel": 1, "t0_s": 0.2, "train": {"P_W": 1.0, "tp_s": 0.01}}
    ]
  })";
  const PatternFile pf = parse_pattern(text);
  CHECK(pf.layout.active_cells().size() == 5);
  REQUIRE(pf.pattern.events.size() == 2);
  CHECK(pf.pattern.events[0].pixel == 5);
  CHECK(pf.pattern.events[0].train.pulse_count == 3);
  CHECK(pf.pattern.events[1].train.absorbed_fraction == 0.66);
  CHECK(pf.pattern.total_duration == doctest::Approx(0.21));
  const PatternFile back = parse_pattern(pattern_to_json(pf.layout, pf.pattern));
  CHECK(back.pattern.events[0].pixel == 5);
  CHECK(back.layout.active_mask == pf.layout.active_mask);

  CHECK(testing::error_code([] {
          parse_pattern(R"({"layout": {"rows": 1, "cols": 1}, "events": [{"pixel": [0, 4], "t0_s": 0,
                        "train": {"P_W": 1, "tp_s": 0.01}}]})");
        }) == "unknown-pixel");
  CHECK(testing::error_code([] {
          parse_pattern(R"({"layout": {"rows": 2, "cols": 1, "mask": [1, 0]}, "events": [{"pixel": 1,
                        "t0_s": 0, "train": {"P_W": 1, "tp_s": 0.01}}]})");
        }) == "unknown-pixel");
  CHECK(testing::error_code([] {
          parse_pattern(R"({"layout": {"rows": 1, "cols": 1}, "events": [], "colour": 3})");
        }) == "invalid-config");
}

TEST_CASE("trace csv round trip") {
  TraceSeries tr = synthetic_rc_trace(145.0, 99e-6, 1.63, 0.01, 1e-4);
  tr.air_temperature[3] = 300.1234567890123;
  std::stringstream ss;
  write_trace_csv(ss, tr);
  const TraceSeries back = read_trace_csv(ss);
  CHECK(back.time == tr.time);
  CHECK(back.absorber_temperature == tr.absorber_temperature);
  CHECK(back.air_temperature == tr.air_temperature);
  CHECK(back.sample_period == doctest::Approx(1e-4));
  CHECK(format_double(0.001) == "0.001");
}

TEST_CASE("bad traces are rejected") {
  auto code = [](const std::string& text) {
    std::stringstream ss(text);
    return testing::error_code([&] { read_trace_csv(ss); });
  };
  CHECK(code("") == "invalid-trace");
  CHECK(code("time,T\n0,300\n") == "invalid-trace");
  CHECK(code("t_s,T_abs_K,T_air_K\n0,300\n") == "invalid-trace");
  CHECK(code("t_s,T_abs_K,T_air_K\n0,300,300\n0.1,abc,300\n") == "invalid-trace");
  CHECK(code("t_s,T_abs_K,T_air_K\n0,300,300\n0.1,300,300\n0.3,300,300\n") == "invalid-trace");
  CHECK(code("t_s,T_abs_K,T_air_K\n0,-3,300\n") == "invalid-trace");
  CHECK(code("t_s,T_abs_K,T_air_K\r\n0,300,300\r\n0.1,301,300\r\n") == "");
}

TEST_CASE("atomic writes leave no temporaries") {
  TempDir dir;
  const fs::path p = dir.path / "out.txt";
  atomic_write_file(p, "first\n");
  atomic_write_file(p, "second\n");
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  CHECK(std::distance(fs::directory_iterator(dir.path), fs::directory_iterator{}) == 1);
  CHECK(testing::error_code([&] { atomic_write_file(dir.path / "missing" / "x.txt", "x"); }) == "io");
}

TEST_CASE("fit report is deterministic") {
  const TraceSeries tr = synthetic_rc_trace(95.0, 102e-6, 1.63, 0.04, 1e-4);
  FitResult f = fit_rc(tr, 1.63);
  CHECK(fit_result_to_json(f) == fit_result_to_json(fit_rc(tr, 1.63)));
  f.seed = 9;
  CHECK(fit_result_to_json(f).find("\"seed\": 9") != std::string::npos);
}
