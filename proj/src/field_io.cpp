#include "pecfdtd/field_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>

namespace pecfdtd {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  File f(std::fopen(path.c_str(), "w"));
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  return f;
}

void finish(File& f, const std::filesystem::path& path) {
  if (std::ferror(f.get()) || std::fclose(f.release()) != 0) throw Error("write to '" + path.string() + "' failed");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(const std::string& s, const std::filesystem::path& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("bad number '" + s + "' in '" + path.string() + "'");
  return v;
}

}  // namespace

void export_field(const Scene& scene, const FieldState& state, const std::filesystem::path& path) {
  File f = open_for_write(path);
  const GridTopology& grid = scene.grid();
  const auto& phi = scene.levelset().phi;
  std::fprintf(f.get(), "x,y,class,phi,hx,hy,ez\n");
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const std::size_t k = grid.index(i, j);
      const Vec2 p = grid.coord(k);
      std::fprintf(f.get(), "%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g\n", p.x, p.y,
                   std::string(to_string(scene.classes()[k])).c_str(), phi[k], state.hx[k], state.hy[k],
                   state.ez[k]);
    }
  }
  finish(f, path);
}

void export_field_vtk(const Scene& scene, const FieldState& state, const std::filesystem::path& path) {
  File f = open_for_write(path);
  const GridTopology& grid = scene.grid();
  const Rect& d = grid.domain();
  std::fprintf(f.get(), "# vtk DataFile Version 3.0\npec fields t=%.17g\nASCII\nDATASET STRUCTURED_POINTS\n",
               state.time);
  std::fprintf(f.get(), "DIMENSIONS %d %d 1\nORIGIN %.17g %.17g 0\nSPACING %.17g %.17g 1\n", grid.nx(), grid.ny(),
               d.x0, d.y0, grid.dx(), grid.dy());
  std::fprintf(f.get(), "POINT_DATA %zu\n", grid.size());
  auto scalars = [&](const char* name, const std::vector<double>& v) {
    std::fprintf(f.get(), "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
    for (const double x : v) std::fprintf(f.get(), "%.17g\n", x);
  };
  scalars("phi", scene.levelset().phi);
  scalars("hx", state.hx);
  scalars("hy", state.hy);
  scalars("ez", state.ez);
  std::fprintf(f.get(), "SCALARS class int 1\nLOOKUP_TABLE default\n");
  for (const NodeClass c : scene.classes()) std::fprintf(f.get(), "%d\n", static_cast<int>(c));
  finish(f, path);
}

void export_grid(const Scene& scene, const std::filesystem::path& path) {
  File f = open_for_write(path);
  const GridTopology& grid = scene.grid();
  std::fprintf(f.get(), "i,j,x,y,shifted,class\n");
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const std::size_t k = grid.index(i, j);
      const Vec2 p = grid.coord(k);
      std::fprintf(f.get(), "%d,%d,%.17g,%.17g,%d,%s\n", i, j, p.x, p.y, grid.shifted(k) ? 1 : 0,
                   std::string(to_string(scene.classes()[k])).c_str());
    }
  }
  finish(f, path);
}

void export_levelset(const Scene& scene, const std::filesystem::path& path) {
  File f = open_for_write(path);
  const GridTopology& grid = scene.grid();
  const LevelSetData& ls = scene.levelset();
  std::fprintf(f.get(), "x,y,phi,nx,ny\n");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec2 p = grid.coord(k);
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.x, p.y, ls.phi[k], ls.normal[k].x, ls.normal[k].y);
  }
  finish(f, path);
}

FieldTable read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "x,y,class,phi,hx,hy,ez")
    throw Error("'" + path.string() + "' is not a field CSV");
  FieldTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 7) throw Error("malformed row in '" + path.string() + "'");
    t.coords.push_back({parse_real(cols[0], path), parse_real(cols[1], path)});
    t.classes.push_back(parse_node_class(cols[2]));
    t.phi.push_back(parse_real(cols[3], path));
    t.state.hx.push_back(parse_real(cols[4], path));
    t.state.hy.push_back(parse_real(cols[5], path));
    t.state.ez.push_back(parse_real(cols[6], path));
  }
  return t;
}

}  // namespace pecfdtd
