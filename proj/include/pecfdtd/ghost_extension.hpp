#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pecfdtd/geometry.hpp"
#include "pecfdtd/levelset.hpp"
#include "pecfdtd/lsq_stencil.hpp"

namespace pecfdtd {

/// Nodes advanced by a constant extension. Everything outside stays frozen.
enum class UpdateRegion {
  phi_pos,     ///< phi > 0: extension of field values (H_par)
  phi_nonneg,  ///< phi >= 0: extension of normal derivatives
};

struct ExtensionOptions {
  double pseudo_cfl = 0.2;
  int steps = 24;
};

/// Normal/tangential split H = h_perp n + h_par t.
struct Decomposition {
  std::vector<double> h_perp;
  std::vector<double> h_par;
};

Decomposition decompose(std::span<const double> hx, std::span<const double> hy, std::span<const Vec2> normal,
                        std::span<const Vec2> tangent);

/// Ghost value assembly at one node: odd part grows linearly
/// from zero, even part mirrors the boundary value.
inline double odd_ghost_value(double dn_boundary, double phi) { return dn_boundary * phi; }
inline double even_ghost_value(double boundary_value, double dn_boundary, double phi) {
  return boundary_value - dn_boundary * phi;
}

/// Ghost-point extension of (Hx, Hy, Ez) across the PEC boundary. Geometry
/// dependent tables are built once; every call only writes ghost nodes of the
/// fields it is given.
class GhostExtension {
 public:
  GhostExtension(const GridTopology& grid, const FitTable& fits, const LevelSetData& ls,
                 std::span<const NodeClass> classes, ExtensionOptions opts = {});

  /// grad(field) . n at exterior nodes, fitted only through exterior and
  /// boundary stencil members; zero elsewhere.
  std::vector<double> normal_derivative(std::span<const double> field) const;

  /// Transports the fields along n with the least-squares scheme
  /// Phi <- Phi~ - dtau n . grad Phi~ on `region`; all other nodes are left
  /// bitwise untouched. The region is first seeded from its frozen neighbors in
  /// order of increasing phi.
  void constant_extend(std::span<const std::span<double>> fields, UpdateRegion region) const;
  void constant_extend(std::span<double> field, UpdateRegion region) const;

  /// Writes ghost-node values of Hx, Hy (even tangential, odd normal part).
  void extend_H(std::span<double> hx, std::span<double> hy) const;
  /// Writes ghost-node values of Ez (odd extension).
  void extend_E(std::span<double> ez) const;
  /// extend_H and extend_E sharing one pseudo-time sweep.
  void extend_all(std::span<double> hx, std::span<double> hy, std::span<double> ez) const;

  const ExtensionOptions& options() const { return opts_; }
  std::span<const std::size_t> ghost_nodes() const { return ghosts_; }

 private:
  void seed(std::span<double> field, const std::vector<std::size_t>& order,
            const std::vector<std::uint8_t>& in_region) const;
  void normal_derivative_into(std::span<const double> field, std::span<double> out) const;

  const GridTopology& grid_;
  const FitTable& fits_;
  const LevelSetData& ls_;
  std::span<const NodeClass> classes_;
  ExtensionOptions opts_;

  std::vector<std::size_t> ghosts_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> exterior_;                  // exterior nodes with a stencil
  std::vector<FitOperator> exterior_ops_;              // one-sided fits, parallel to exterior_
  std::vector<std::size_t> region_pos_, region_nonneg_;  // sorted by increasing phi
  std::vector<std::uint8_t> in_pos_, in_nonneg_;
};

}  // namespace pecfdtd
