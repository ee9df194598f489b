#include "pecfdtd/lsq_stencil.hpp"

#include <cmath>
#include <string>

#include "pecfdtd/parallel.hpp"

namespace pecfdtd {

FitOperator build_fit_operator(Vec2 center, const std::array<Vec2, 4>& neighbors, std::size_t node,
                               const std::array<bool, 5>& active) {
  std::array<Vec2, 5> off{};
  off[0] = {0.0, 0.0};
  double scale = 0.0;
  for (int s = 0; s < 4; ++s) {
    off[s + 1] = neighbors[s] - center;
    if (active[s + 1]) scale = std::max(scale, std::max(std::abs(off[s + 1].x), std::abs(off[s + 1].y)));
  }
  if (!(scale > 0.0)) throw DegenerateStencilError(node, "degenerate stencil at node " + std::to_string(node));

  // Design matrix rows (x/scale, y/scale, 1); the dimensionless normal matrix
  // is O(1) so the determinant guard is scale independent.
  double a[5][3];
  for (int s = 0; s < 5; ++s) {
    const double on = active[s] ? 1.0 : 0.0;
    a[s][0] = on * off[s].x / scale;
    a[s][1] = on * off[s].y / scale;
    a[s][2] = on;
  }
  // m = A^T A, rhs = A^T (3x5)
  double m[3][8] = {};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (int s = 0; s < 5; ++s) sum += a[s][r] * a[s][c];
      m[r][c] = sum;
    }
    for (int s = 0; s < 5; ++s) m[r][3 + s] = a[s][r];
  }

  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (!(std::abs(det) >= 1e-12)) {
    throw DegenerateStencilError(node, "rank-deficient least-squares stencil at node " + std::to_string(node));
  }

  // Gauss-Jordan with partial pivoting on [M | A^T].
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (piv != col)
      for (int c = 0; c < 8; ++c) std::swap(m[col][c], m[piv][c]);
    const double inv = 1.0 / m[col][col];
    for (int c = 0; c < 8; ++c) m[col][c] *= inv;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 8; ++c) m[r][c] -= f * m[col][c];
    }
  }

  FitOperator op;
  for (int s = 0; s < 5; ++s) {
    op.w_c0[s] = m[0][3 + s] / scale;
    op.w_c1[s] = m[1][3 + s] / scale;
    op.w_c2[s] = m[2][3 + s];
  }
  return op;
}

FitTable::FitTable(const GridTopology& grid) {
  const std::size_t n = grid.size();
  ops_.resize(n);
  stencil_.resize(n);
  present_.assign(n, 0);
  parallel_for(n, [&](std::size_t k) {
    const auto& nb = grid.neighbors(k);
    if (nb[kEast] == kNoNeighbor || nb[kWest] == kNoNeighbor || nb[kNorth] == kNoNeighbor ||
        nb[kSouth] == kNoNeighbor) {
      stencil_[k] = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k),
                     static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k)};
      return;
    }
    stencil_[k] = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(nb[kEast]),
                   static_cast<std::uint32_t>(nb[kWest]), static_cast<std::uint32_t>(nb[kNorth]),
                   static_cast<std::uint32_t>(nb[kSouth])};
    const std::array<Vec2, 4> pts{grid.coord(stencil_[k][1]), grid.coord(stencil_[k][2]),
                                  grid.coord(stencil_[k][3]), grid.coord(stencil_[k][4])};
    ops_[k] = build_fit_operator(grid.coord(k), pts, k);
    present_[k] = 1;
  });
}

}  // namespace pecfdtd
