#include "pecfdtd/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pecfdtd/parallel.hpp"

namespace pecfdtd {

namespace {

double circle_level(Vec2 c, double r, Vec2 p) { return r - norm(p - c); }

// Nearest node that owns a full stencil (clamps edge nodes one step inward).
std::size_t inward_node(const GridTopology& grid, std::size_t k) {
  const int i = std::clamp(grid.i_of(k), 1, grid.nx() - 2);
  const int j = std::clamp(grid.j_of(k), 1, grid.ny() - 2);
  return grid.index(i, j);
}

}  // namespace

std::vector<double> initialize_phi(const Shape& shape, const GridTopology& grid) {
  if (shape.kind == ShapeKind::none) throw InvalidArgument("initialize_phi needs a PEC shape");
  std::vector<double> phi(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid.shifted(k)) {
      phi[k] = 0.0;
      continue;
    }
    const Vec2 p = grid.coord(k);
    const double outer = circle_level(shape.center, shape.radius, p);
    phi[k] = shape.kind == ShapeKind::circle
                 ? outer
                 : std::min(outer, -circle_level(shape.cutter_center, shape.cutter_radius, p));
  }
  return phi;
}

std::vector<double> redistance(std::span<const double> phi0, const GridTopology& grid, const FitTable& fits,
                               const RedistanceOptions& opts, RedistanceReport* report) {
  if (phi0.size() != grid.size()) throw InvalidArgument("phi0 size does not match the grid");
  if (!(opts.pseudo_cfl > 0.0)) throw InvalidArgument("redistance pseudo_cfl must be positive");
  const double h = grid.h();
  const double dtau = opts.pseudo_cfl * h;
  const int max_iter = opts.max_iter > 0
                           ? opts.max_iter
                           : static_cast<int>(std::ceil(std::max(grid.nx(), grid.ny()) / opts.pseudo_cfl));

  const std::size_t n = grid.size();
  std::vector<std::size_t> active;
  std::vector<std::size_t> ring;
  for (std::size_t k = 0; k < n; ++k) {
    if (grid.shifted(k)) continue;
    if (!fits.has(k)) {
      ring.push_back(k);
      continue;
    }
    if (opts.band > 0.0 && std::abs(phi0[k]) > opts.band * h) continue;
    active.push_back(k);
  }

  std::vector<double> cur(phi0.begin(), phi0.end());
  for (std::size_t k = 0; k < n; ++k)
    if (grid.shifted(k)) cur[k] = 0.0;
  std::vector<double> next = cur;
  std::vector<double> delta(active.size(), 0.0);

  RedistanceReport rep;
  for (int it = 0; it < max_iter; ++it) {
    parallel_for(active.size(), [&](std::size_t a) {
      const std::size_t k = active[a];
      const Stencil5 v = fits.gather(k, cur);
      const FitOperator& op = fits.op(k);
      const Gradient g = fitted_gradient(op, v);
      const double s = smoothed_sign(cur[k], h);
      const double upd = fitted_value(op, v) - dtau * s * (std::hypot(g.dx, g.dy) - 1.0);
      next[k] = upd;
      delta[a] = std::abs(upd - cur[k]);
    });
    for (const std::size_t k : ring) next[k] = next[inward_node(grid, k)];
    double max_delta = 0.0;
    for (const double d : delta) max_delta = std::max(max_delta, d);
    cur.swap(next);
    rep.iterations = it + 1;
    rep.max_update = max_delta;
    if (max_delta < opts.tol * h) {
      rep.converged = true;
      break;
    }
  }
  if (report) *report = rep;
  if (!rep.converged && rep.max_update > 10.0 * opts.tol * h) {
    throw ConvergenceError("redistancing did not converge after " + std::to_string(rep.iterations) +
                           " iterations (max update " + std::to_string(rep.max_update) + ")");
  }
  return cur;
}

std::vector<double> gradient_magnitude(const GridTopology& grid, const FitTable& fits, std::span<const double> phi) {
  std::vector<double> out(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t k) {
    if (!fits.has(k)) return;
    const Gradient g = fits.gradient(k, phi);
    out[k] = std::hypot(g.dx, g.dy);
  });
  return out;
}

void compute_normals_tangents(const GridTopology& grid, const FitTable& fits, std::span<const NodeClass> classes,
                              LevelSetData& ls) {
  const std::size_t n = grid.size();
  ls.normal.assign(n, Vec2{});
  ls.tangent.assign(n, Vec2{});
  std::vector<std::uint8_t> valid(n, 0);

  parallel_for(n, [&](std::size_t k) {
    if (!fits.has(k)) return;
    const Gradient g = fits.gradient(k, ls.phi);
    const double mag = std::hypot(g.dx, g.dy);
    if (mag < 1e-8) return;
    ls.normal[k] = {g.dx / mag, g.dy / mag};
    valid[k] = 1;
  });

  auto in_band = [&](std::size_t k) {
    auto near_pec = [&](std::size_t m) {
      return classes[m] == NodeClass::boundary || classes[m] == NodeClass::ghost;
    };
    if (near_pec(k)) return true;
    for (const auto nb : grid.neighbors(k))
      if (nb != kNoNeighbor && near_pec(static_cast<std::size_t>(nb))) return true;
    return false;
  };

  for (std::size_t k = 0; k < n; ++k) {
    if (valid[k] || !fits.has(k)) continue;
    if (!classes.empty() && in_band(k)) {
      throw GeometryError("degenerate normal (|grad phi| < 1e-8) at node (" + std::to_string(grid.i_of(k)) + ", " +
                          std::to_string(grid.j_of(k)) + ") next to the PEC boundary");
    }
  }

  // Flood remaining nodes from valid neighbors, in index order for determinism.
  for (std::size_t k = 0; k < n; ++k)
    if (!fits.has(k) && valid[inward_node(grid, k)]) {
      ls.normal[k] = ls.normal[inward_node(grid, k)];
      valid[k] = 1;
    }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (valid[k]) continue;
      for (const auto nb : grid.neighbors(k)) {
        if (nb != kNoNeighbor && valid[static_cast<std::size_t>(nb)] == 1) {
          ls.normal[k] = ls.normal[static_cast<std::size_t>(nb)];
          valid[k] = 2;  // filled this pass
          changed = true;
          break;
        }
      }
    }
    for (auto& v : valid)
      if (v == 2) v = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!valid[k]) ls.normal[k] = {1.0, 0.0};
    ls.tangent[k] = {ls.normal[k].y, -ls.normal[k].x};
  }
}

}  // namespace pecfdtd
