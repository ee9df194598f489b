#pragma once

#include <span>
#include <vector>

#include "pecfdtd/geometry.hpp"
#include "pecfdtd/lsq_stencil.hpp"

namespace pecfdtd {

/// Signed distance to the PEC curve (positive inside) with unit normal and
/// tangent per node. The normal points toward increasing phi, i.e. into the PEC;
/// the tangent is the normal rotated clockwise by pi/2.
struct LevelSetData {
  std::vector<double> phi;
  std::vector<Vec2> normal;
  std::vector<Vec2> tangent;
};

/// Sign-correct analytic seed: r - |p - c| for a circle, min(phi_outer,
/// -phi_cutter) for a half moon. Shifted nodes get exactly zero.
std::vector<double> initialize_phi(const Shape& shape, const GridTopology& grid);

/// Smoothed sign x / sqrt(x^2 + dx^2).
inline double smoothed_sign(double x, double dx) { return x / std::sqrt(x * x + dx * dx); }

struct RedistanceOptions {
  double pseudo_cfl = 0.4;  ///< pseudo time step over dx
  double tol = 1e-3;        ///< stop when the max update drops below tol * dx
  int max_iter = 0;         ///< 0 selects max(nx, ny) / pseudo_cfl
  double band = 0.0;        ///< > 0 limits updates to |phi0| <= band * dx
};

struct RedistanceReport {
  int iterations = 0;
  double max_update = 0.0;  ///< last max |phi_new - phi| (domain units)
  bool converged = false;
};

/// Pseudo-time iteration of phi_t + sgn(phi)(|grad phi| - 1) = 0 with
/// least-squares values and gradients. Shifted nodes stay pinned at zero; outer
/// ring nodes copy the nearest node that has a full stencil.
/// Throws ConvergenceError if max_iter is hit with an update above 10 * tol * dx.
std::vector<double> redistance(std::span<const double> phi0, const GridTopology& grid, const FitTable& fits,
                               const RedistanceOptions& opts = {}, RedistanceReport* report = nullptr);

/// n = grad(phi)/|grad(phi)| and t = (n_y, -n_x). Nodes with a vanishing
/// gradient copy a neighbor's normal unless they sit in the boundary band
/// (boundary, ghost, or adjacent to either), which is an error.
void compute_normals_tangents(const GridTopology& grid, const FitTable& fits, std::span<const NodeClass> classes,
                              LevelSetData& ls);

/// Least-squares |grad phi| per node (0 where no stencil exists).
std::vector<double> gradient_magnitude(const GridTopology& grid, const FitTable& fits, std::span<const double> phi);

}  // namespace pecfdtd
