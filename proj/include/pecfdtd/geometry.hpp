#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pecfdtd/common.hpp"

namespace pecfdtd {

enum class ShapeKind { none, circle, half_moon };

/// Analytic PEC cross section. A half moon is the outer disk minus the cutter disk.
struct Shape {
  ShapeKind kind = ShapeKind::none;
  Vec2 center{5.0, 5.0};
  double radius = 2.0;
  Vec2 cutter_center{6.2, 5.0};
  double cutter_radius = 2.0;

  static Shape none() { return {}; }
  static Shape circle(Vec2 c, double r) { return {ShapeKind::circle, c, r, {}, 0.0}; }
  static Shape half_moon(Vec2 outer_c, double outer_r, Vec2 cutter_c, double cutter_r) {
    return {ShapeKind::half_moon, outer_c, outer_r, cutter_c, cutter_r};
  }

  /// The two points where the outer and cutter circles meet (half moon only).
  std::array<Vec2, 2> corners() const;
};

std::string_view to_string(ShapeKind kind);
ShapeKind parse_shape_kind(std::string_view name);

/// Distance from the shape's bounding disk to the nearest domain edge.
double clearance(const Shape& shape, const Rect& domain);

/// Throws InvalidArgument unless the shape is well formed and keeps at least
/// radius/2 clearance from the domain edges.
void validate_shape(const Shape& shape, const Rect& domain);

enum Direction : int { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };
inline constexpr std::int32_t kNoNeighbor = -1;

/// Rectangular lattice whose nodes may be moved onto the PEC curve. The
/// neighbor table is the original lattice adjacency and never changes.
class GridTopology {
 public:
  GridTopology() = default;
  GridTopology(const Rect& domain, int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double h() const { return std::max(dx_, dy_); }
  const Rect& domain() const { return domain_; }
  std::size_t size() const { return coords_.size(); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int i_of(std::size_t k) const { return static_cast<int>(k % static_cast<std::size_t>(nx_)); }
  int j_of(std::size_t k) const { return static_cast<int>(k / static_cast<std::size_t>(nx_)); }

  /// Unshifted position of node (i, j).
  Vec2 lattice_point(int i, int j) const {
    return {domain_.x0 + i * dx_, domain_.y0 + j * dy_};
  }
  Vec2 lattice_point(std::size_t k) const { return lattice_point(i_of(k), j_of(k)); }

  std::span<const Vec2> coords() const { return coords_; }
  Vec2 coord(std::size_t k) const { return coords_[k]; }
  const std::array<std::int32_t, 4>& neighbors(std::size_t k) const { return neighbors_[k]; }
  std::span<const std::array<std::int32_t, 4>> neighbor_table() const { return neighbors_; }
  bool shifted(std::size_t k) const { return shifted_[k] != 0; }
  bool on_outer_ring(std::size_t k) const {
    const int i = i_of(k), j = j_of(k);
    return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
  }

  /// Move node k to p and flag it as shifted.
  void shift_node(std::size_t k, Vec2 p) {
    coords_[k] = p;
    shifted_[k] = 1;
  }

 private:
  Rect domain_{};
  int nx_ = 0;
  int ny_ = 0;
  double dx_ = 0.0;
  double dy_ = 0.0;
  std::vector<Vec2> coords_;
  std::vector<std::array<std::int32_t, 4>> neighbors_;
  std::vector<std::uint8_t> shifted_;
};

/// Uniform lattice with nx * ny nodes (node counts, not cells). Requires nx, ny >= 8.
GridTopology build_uniform_grid(const Rect& domain, int nx, int ny);

/// Where a boundary crossing came from.
enum class CrossingLine : std::uint8_t { vertical, horizontal, corner };

struct Intersection {
  Vec2 point;
  CrossingLine line = CrossingLine::vertical;
  int line_index = -1;  ///< i for vertical grid lines, j for horizontal ones
};

/// All crossings of the shape's boundary curve with the grid lines x = x_i and
/// y = y_j (plus the two corner points of a half moon). Tangencies count once.
std::vector<Intersection> find_boundary_intersections(const Shape& shape, const GridTopology& grid);

struct ShiftResult {
  GridTopology grid;
  /// Intersections whose nearest node was already claimed by a closer one.
  std::vector<Intersection> dropped;
};

/// Moves each intersection's nearest lattice node onto the intersection. A node
/// claimed by several intersections takes the closest one; exact distance ties
/// go to the lexicographically smallest (x, then y) point.
ShiftResult apply_point_shift(const GridTopology& grid, std::span<const Intersection> intersections);

enum class NodeClass : std::uint8_t { exterior, boundary, ghost, deep_interior };

std::string_view to_string(NodeClass c);
NodeClass parse_node_class(std::string_view name);

/// Exterior (phi < 0), boundary (shifted), ghost (phi > 0 with an exterior or
/// boundary neighbor) and deep interior for everything else.
std::vector<NodeClass> classify_nodes(const GridTopology& grid, std::span<const double> phi);

}  // namespace pecfdtd
