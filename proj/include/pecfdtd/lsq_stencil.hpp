#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pecfdtd/geometry.hpp"

namespace pecfdtd {

/// Stencil slot order used by every fit: center, east, west, north, south.
enum StencilSlot : int { kC = 0, kE = 1, kW = 2, kN = 3, kS = 4 };
using Stencil5 = std::array<double, 5>;

/// Least-squares weights of the plane u ~ c0 (x - xc) + c1 (y - yc) + c2 fitted
/// through the five stencil samples. Each coefficient is a dot product of its
/// weight row with the stencil values.
struct FitOperator {
  Stencil5 w_c0{};
  Stencil5 w_c1{};
  Stencil5 w_c2{};
};

/// Solves the 5x3 least-squares problem for the plane through center and its
/// four neighbors. Slots with active[s] == false are left out of the fit (their
/// weights are zero); at least three non-collinear points must remain.
/// Throws DegenerateStencilError naming `node` for rank-deficient stencils.
FitOperator build_fit_operator(Vec2 center, const std::array<Vec2, 4>& neighbors, std::size_t node = 0,
                               const std::array<bool, 5>& active = {true, true, true, true, true});

inline double apply_weights(const Stencil5& w, const Stencil5& v) {
  return w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3] + w[4] * v[4];
}

/// Fitted value c2 at the stencil center.
inline double fitted_value(const FitOperator& op, const Stencil5& v) { return apply_weights(op.w_c2, v); }

struct Gradient {
  double dx = 0.0;
  double dy = 0.0;
};

/// Gradient (c0, c1) of the fitted plane.
inline Gradient fitted_gradient(const FitOperator& op, const Stencil5& v) {
  return {apply_weights(op.w_c0, v), apply_weights(op.w_c1, v)};
}

/// Per-node fit operators for every node with a complete 5-point stencil, plus
/// the flattened stencil node indices. Immutable once built.
class FitTable {
 public:
  FitTable() = default;
  explicit FitTable(const GridTopology& grid);

  bool has(std::size_t k) const { return present_[k] != 0; }
  const FitOperator& op(std::size_t k) const { return ops_[k]; }
  const std::array<std::uint32_t, 5>& stencil(std::size_t k) const { return stencil_[k]; }
  std::size_t size() const { return ops_.size(); }

  Stencil5 gather(std::size_t k, std::span<const double> field) const {
    const auto& s = stencil_[k];
    return {field[s[0]], field[s[1]], field[s[2]], field[s[3]], field[s[4]]};
  }
  double value(std::size_t k, std::span<const double> field) const { return fitted_value(ops_[k], gather(k, field)); }
  Gradient gradient(std::size_t k, std::span<const double> field) const {
    return fitted_gradient(ops_[k], gather(k, field));
  }

  /// Replace the operator at node k (used for reduced one-sided fits).
  void set(std::size_t k, const FitOperator& op) { ops_[k] = op; }

 private:
  std::vector<FitOperator> ops_;
  std::vector<std::array<std::uint32_t, 5>> stencil_;
  std::vector<std::uint8_t> present_;
};

}  // namespace pecfdtd
