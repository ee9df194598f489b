#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pecfdtd/config.hpp"
#include "pecfdtd/field_io.hpp"
#include "pecfdtd/harness.hpp"

using namespace pecfdtd;
namespace fs = std::filesystem;

namespace {

const Rect kBox{0.0, 0.0, 10.0, 10.0};

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pecfdtd_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("config parsing") {
  const SimulationConfig c = parse_config(
      "# comment\n"
      "shape = half_moon   # trailing comment\n"
      "grids = 50 100\n"
      "reference_grid = 200\n"
      "cfl = 1.4\n"
      "wavelength = 0.6\n"
      "final_time = 0.5\n"
      "\n"
      "extension_steps = 12\n");
  CHECK(c.shape.kind == ShapeKind::half_moon);
  CHECK(c.shape.cutter_center == Vec2{6.2, 5.0});
  CHECK(c.grids == std::vector<int>{50, 100});
  CHECK(c.cfl == 1.4);
  CHECK(c.omega == doctest::Approx(2.0 * 3.141592653589793 / 0.6));
  CHECK(c.scene.extension.steps == 12);
  CHECK(c.scene.redistance.pseudo_cfl == 0.4);
  CHECK(c.run_grid() == 50);

  const SimulationConfig d = parse_config("");
  CHECK(d.grids == std::vector<int>{100, 200, 400});
  CHECK(d.reference_grid == 800);
  CHECK(d.band_width == 10.0);
  CHECK(d.final_time == 1.0);
}

TEST_CASE("config errors name the field") {
  auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("colour = blue\n") == "colour");
  CHECK(key_of("cfl = fast\n") == "cfl");
  CHECK(key_of("cfl = -1\n") == "cfl");
  CHECK(key_of("grids = 100 4\n") == "grids");
  CHECK(key_of("final_time = 3.5\n") == "final_time");  // causality: clearance is 3
  CHECK(key_of("radius = 4.5\n") == "shape");
  CHECK(key_of("shape = square\n") == "shape");
  CHECK(key_of("final_time = 3.0\n") == "<none>");
  CHECK_THROWS_WITH_AS(parse_config("just words\n"), doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config("definitely/missing.cfg"), doctest::Contains("config not found"), ConfigError);
}

TEST_CASE("observed orders") {
  const std::vector<int> cells{100, 200};
  const std::vector<std::optional<double>> e{0.4, 0.1};
  const auto o = observed_orders(cells, e);
  CHECK_FALSE(o[0].has_value());
  CHECK(*o[1] == doctest::Approx(2.0));

  const std::vector<int> c3{100, 200, 400, 800};
  const std::vector<std::optional<double>> e3{0.9, 0.31, std::nullopt, 0.002};
  const auto o3 = observed_orders(c3, e3);
  CHECK(*o3[1] == std::log2(0.9 / 0.31));
  CHECK_FALSE(o3[2].has_value());
  CHECK_FALSE(o3[3].has_value());

  const std::vector<int> c4{100, 300};
  const std::vector<std::optional<double>> e4{0.9, 0.1};
  CHECK(*observed_orders(c4, e4)[1] == doctest::Approx(2.0));
}

TEST_CASE("report formatting") {
  ErrorReport r;
  r.rows = {{100, 10, {0.4, 0.2}, {}, ""}, {200, 40, {0.1, 0.1}, {}, ""}, {400, 0, {}, {}, "boom"}};
  r.compute_orders();
  CHECK(*r.rows[1].order[0] == doctest::Approx(2.0));
  CHECK(*r.rows[1].order[1] == doctest::Approx(1.0));
  const std::string text = format_report(r);
  CHECK(text.find("Hx(Bx)") != std::string::npos);
  CHECK(text.find("FAILED: boom") != std::string::npos);

  const fs::path dir = scratch_dir("report");
  write_report_csv(r, dir / "t.csv");
  std::ifstream in(dir / "t.csv");
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "grid,samples,Ez_error,Ez_order,Hx(Bx)_error,Hx(Bx)_order,status");
  std::getline(in, row);
  std::getline(in, row);
  CHECK(row.rfind("200,40,0.10000000000000001,2,", 0) == 0);
}

TEST_CASE("sampling band") {
  Scene coarse(Shape::circle({5, 5}, 2), kBox, 101, 101);
  const auto mask = sampling_mask(coarse, 1.0);
  const auto& phi = coarse.levelset().phi;
  for (const std::size_t k : mask) {
    CHECK(coarse.classes()[k] == NodeClass::exterior);
    CHECK(phi[k] < 0.0);
    CHECK(phi[k] >= -1.0);
  }
  std::size_t expected = 0;
  for (std::size_t k = 0; k < phi.size(); ++k)
    if (coarse.classes()[k] == NodeClass::exterior && phi[k] < 0.0 && phi[k] >= -1.0) ++expected;
  CHECK(mask.size() == expected);
  // the annulus is roughly pi ((3)^2 - 2^2) / dx^2 nodes
  CHECK(static_cast<double>(mask.size()) == doctest::Approx(3.14159 * 5.0 / 0.01).epsilon(0.1));
  CHECK_THROWS_AS(sampling_mask(coarse, 1e-9), GeometryError);
}

TEST_CASE("reference interpolation") {
  Scene fine(Shape::none(), kBox, 41, 41);
  const auto coords = fine.grid().coords();
  std::vector<double> u(coords.size()), flat(coords.size(), 0.75);
  for (std::size_t k = 0; k < coords.size(); ++k) u[k] = coords[k].x + 2.0 * coords[k].y;

  CHECK(interpolate_reference(fine, u, fine.grid().coord(fine.grid().index(7, 9))) == u[fine.grid().index(7, 9)]);
  for (const Vec2 p : {Vec2{0.1, 0.1}, Vec2{3.33, 7.01}, Vec2{9.99, 0.0}, Vec2{10.0, 10.0}}) {
    CHECK(interpolate_reference(fine, u, p) == doctest::Approx(p.x + 2.0 * p.y));
    CHECK(interpolate_reference(fine, flat, p) == doctest::Approx(0.75));
  }
  CHECK_THROWS_AS(interpolate_reference(fine, u, Vec2{10.5, 3.0}), InvalidArgument);
  CHECK_THROWS_AS(interpolate_reference(fine, u, Vec2{3.0, -0.1}), InvalidArgument);
}

TEST_CASE("field CSV round trip") {
  Scene scene(Shape::circle({5, 5}, 2), kBox, 51, 51);
  FieldState s = initial_state(scene, 2.0 * 3.141592653589793 / 0.6);
  for (std::size_t k = 0; k < s.size(); ++k) s.hx[k] = std::sqrt(static_cast<double>(k)) / 7.0;
  const fs::path dir = scratch_dir("csv");
  export_field(scene, s, dir / "f.csv");
  const FieldTable t = read_field_csv(dir / "f.csv");
  REQUIRE(t.coords.size() == s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(same_bits(t.state.hx[k], s.hx[k]));
    CHECK(same_bits(t.state.hy[k], s.hy[k]));
    CHECK(same_bits(t.state.ez[k], s.ez[k]));
    CHECK(same_bits(t.phi[k], scene.levelset().phi[k]));
    CHECK(t.coords[k] == scene.grid().coord(k));
    CHECK(t.classes[k] == scene.classes()[k]);
    if (t.classes[k] == NodeClass::boundary) CHECK(t.phi[k] == 0.0);
  }
  // row-major by (j, i)
  CHECK(t.coords[1].x > t.coords[0].x);
  CHECK(t.coords[51].y > t.coords[0].y);
}

TEST_CASE("small free-space exports") {
  Scene scene(Shape::none(), {0, 0, 1, 1}, 9, 9);
  const FieldState s(scene.grid().size());
  const fs::path dir = scratch_dir("small");
  export_field(scene, s, dir / "f.csv");
  export_field_vtk(scene, s, dir / "f.vtk");
  export_grid(scene, dir / "g.csv");
  auto lines = [](const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string l; std::getline(in, l);) ++n;
    return n;
  };
  CHECK(lines(dir / "f.csv") == 82);
  CHECK(lines(dir / "g.csv") == 82);
  std::ifstream vtk(dir / "f.vtk");
  std::stringstream ss;
  ss << vtk.rdbuf();
  CHECK(ss.str().rfind("# vtk DataFile Version 3.0", 0) == 0);
  CHECK(ss.str().find("DIMENSIONS 9 9 1") != std::string::npos);
  CHECK(ss.str().find("SCALARS class int 1") != std::string::npos);
  CHECK_THROWS_AS(export_field(scene, s, "/proc/nope/f.csv"), Error);
}

TEST_CASE("a tiny convergence study") {
  SimulationConfig c = parse_config("grids = 25 50\nreference_grid = 100\nfinal_time = 0.5\n");
  const ErrorReport r = convergence_study(c);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.failure.empty());
    CHECK(row.samples > 0);
    CHECK(*row.error[0] > 0.0);
  }
  CHECK(r.band == doctest::Approx(4.0));
  CHECK(r.rows[1].order[0].has_value());

  c.reference_grid = 60;
  CHECK_THROWS_AS(convergence_study(c), ConfigError);
}

TEST_CASE("free space at 100^2") {
  SimulationConfig c = parse_config("shape = none\ngrids = 100\nfinal_time = 0.6\ncfl = 0.5\n");
  const ErrorReport r = freespace_study(c, TimeScheme::bfecc);
  REQUIRE(r.rows.size() == 1);
  CHECK(std::isfinite(*r.rows[0].error[0]));
  CHECK(*r.rows[0].error[0] < 1.0);
}

TEST_CASE("level-set diagnostics on the 200^2 circle") {
  Scene scene(Shape::circle({5, 5}, 2), kBox, 201, 201);
  const LevelSetDiagnostics d = levelset_diagnostics(scene);
  CHECK(d.max_gradient_deviation <= 0.05);
  REQUIRE(d.max_distance_error.has_value());
  CHECK(*d.max_distance_error <= 2 * 0.05 * 0.05);
  std::size_t total = 0;
  for (const auto c : d.counts) total += c;
  CHECK(total == d.samples);
}
