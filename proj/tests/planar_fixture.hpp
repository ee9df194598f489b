#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "pecfdtd/ghost_extension.hpp"
#include "pecfdtd/geometry.hpp"
#include "pecfdtd/levelset.hpp"
#include "pecfdtd/lsq_stencil.hpp"

namespace pecfdtd::testing {

// Half-plane PEC x > wall on [0,10]^2; the nodes on x = wall are shifted in
// place so they classify as boundary nodes.
struct PlanarPec {
  double wall = 5.0;
  GridTopology grid;
  FitTable fits;
  LevelSetData ls;
  std::vector<NodeClass> classes;
  std::unique_ptr<GhostExtension> ext;

  double phi(std::size_t k) const { return ls.phi[k]; }
  double x(std::size_t k) const { return grid.coord(k).x; }
  double y(std::size_t k) const { return grid.coord(k).y; }
};

inline std::unique_ptr<PlanarPec> make_planar_pec(double dx, ExtensionOptions opts = {}) {
  auto p = std::make_unique<PlanarPec>();
  const int cells = static_cast<int>(std::lround(10.0 / dx));
  p->grid = build_uniform_grid({0.0, 0.0, 10.0, 10.0}, cells + 1, cells + 1);
  const int iw = static_cast<int>(std::lround(p->wall / dx));
  for (int j = 0; j < p->grid.ny(); ++j) {
    const std::size_t k = p->grid.index(iw, j);
    p->grid.shift_node(k, p->grid.coord(k));
  }
  p->fits = FitTable(p->grid);
  const std::size_t n = p->grid.size();
  p->ls.phi.resize(n);
  for (std::size_t k = 0; k < n; ++k) p->ls.phi[k] = p->grid.shifted(k) ? 0.0 : p->grid.coord(k).x - p->wall;
  p->ls.normal.assign(n, Vec2{1.0, 0.0});
  p->ls.tangent.assign(n, Vec2{0.0, -1.0});
  p->classes = classify_nodes(p->grid, p->ls.phi);
  p->ext = std::make_unique<GhostExtension>(p->grid, p->fits, p->ls, p->classes, opts);
  return p;
}

using Field2 = std::function<double(double, double)>;

struct PlanarFields {
  Field2 hx, hy, ez;  // exterior data; hx is the normal component, hy tangential
};

// Fills exterior/boundary nodes from `f` and the PEC interior with garbage,
// runs the extension, and returns the max ghost-node deviation from the exact
// mirror oracle: odd for hx and ez, even for hy. Only ghosts with
// |y - 5| <= 2.5 are compared; closer to the domain edge the wall runs into
// frozen ring nodes, which a closed PEC never does.
inline double planar_ghost_error(const PlanarPec& p, const PlanarFields& f) {
  const std::size_t n = p.grid.size();
  std::vector<double> hx(n), hy(n), ez(n);
  for (std::size_t k = 0; k < n; ++k) {
    const bool outside = p.classes[k] == NodeClass::exterior || p.classes[k] == NodeClass::boundary;
    hx[k] = outside ? f.hx(p.x(k), p.y(k)) : 1e3;
    hy[k] = outside ? f.hy(p.x(k), p.y(k)) : -1e3;
    ez[k] = outside ? f.ez(p.x(k), p.y(k)) : 1e3;
  }
  p.ext->extend_all(hx, hy, ez);
  double err = 0.0;
  for (const std::size_t k : p.ext->ghost_nodes()) {
    if (std::abs(p.y(k) - 5.0) > 2.5) continue;
    const double xm = 2.0 * p.wall - p.x(k);
    const double yk = p.y(k);
    err = std::max(err, std::abs(hx[k] + f.hx(xm, yk)));
    err = std::max(err, std::abs(hy[k] - f.hy(xm, yk)));
    err = std::max(err, std::abs(ez[k] + f.ez(xm, yk)));
  }
  return err;
}

// Odd components vanish on the wall; all three are linear in x - wall.
inline PlanarFields planar_linear_fields() {
  return {[](double x, double) { return 0.7 * (5.0 - x); },
          [](double x, double) { return 1.3 + 0.4 * (x - 5.0); },
          [](double x, double) { return -1.1 * (x - 5.0); }};
}

// Smooth, with tangential variation; the mirror oracle is no longer reproduced
// exactly so the truncation order is visible.
inline PlanarFields planar_smooth_fields() {
  return {[](double x, double y) { return std::sin(2.0 * (5.0 - x)) * (1.0 + 0.3 * std::sin(y)); },
          [](double x, double y) { return std::cos(1.5 * (x - 5.0)) + 0.5 * std::sin(y); },
          [](double x, double y) { return std::sin(5.0 - x) * std::cos(0.5 * y); }};
}

}  // namespace pecfdtd::testing
