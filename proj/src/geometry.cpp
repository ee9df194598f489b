#include "pecfdtd/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pecfdtd {

namespace {

// Roots of |p - c| = r along the line x = x_line (or y = y_line when
// horizontal). Returns 0, 1 (tangency) or 2 points.
int circle_line_crossings(Vec2 c, double r, double line, bool vertical, Vec2 out[2]) {
  const double d = vertical ? line - c.x : line - c.y;
  if (std::abs(d) > r) return 0;
  const double s = std::sqrt((r - d) * (r + d));
  if (s == 0.0) {
    out[0] = vertical ? Vec2{line, c.y} : Vec2{c.x, line};
    return 1;
  }
  if (vertical) {
    out[0] = {line, c.y - s};
    out[1] = {line, c.y + s};
  } else {
    out[0] = {c.x - s, line};
    out[1] = {c.x + s, line};
  }
  return 2;
}

bool lex_less(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

}  // namespace

std::array<Vec2, 2> Shape::corners() const {
  // Intersection of the outer circle and the cutter circle.
  const Vec2 d = cutter_center - center;
  const double dist = norm(d);
  const double a = (radius * radius - cutter_radius * cutter_radius + dist * dist) / (2.0 * dist);
  const double hh = std::sqrt(std::max(0.0, radius * radius - a * a));
  const Vec2 u{d.x / dist, d.y / dist};
  const Vec2 m = center + a * u;
  const Vec2 perp{-u.y, u.x};
  Vec2 p = m - hh * perp;
  Vec2 q = m + hh * perp;
  if (lex_less(q, p)) std::swap(p, q);
  return {p, q};
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::circle: return "circle";
    case ShapeKind::half_moon: return "half_moon";
    case ShapeKind::none: break;
  }
  return "none";
}

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "circle") return ShapeKind::circle;
  if (name == "half_moon") return ShapeKind::half_moon;
  if (name == "none") return ShapeKind::none;
  throw InvalidArgument("unknown shape kind '" + std::string(name) + "'");
}

double clearance(const Shape& shape, const Rect& domain) {
  if (shape.kind == ShapeKind::none) return std::numeric_limits<double>::infinity();
  // Both shapes are contained in the (outer) disk.
  const Vec2 c = shape.center;
  const double r = shape.radius;
  return std::min({c.x - r - domain.x0, domain.x1 - c.x - r, c.y - r - domain.y0, domain.y1 - c.y - r});
}

void validate_shape(const Shape& shape, const Rect& domain) {
  if (shape.kind == ShapeKind::none) return;
  if (!(shape.radius > 0.0)) throw InvalidArgument("shape radius must be positive");
  if (shape.kind == ShapeKind::half_moon) {
    if (!(shape.cutter_radius > 0.0)) throw InvalidArgument("half_moon cutter radius must be positive");
    const double dist = norm(shape.cutter_center - shape.center);
    // Two circles meet in exactly two points.
    if (!(dist < shape.radius + shape.cutter_radius) ||
        !(dist > std::abs(shape.radius - shape.cutter_radius))) {
      throw InvalidArgument("half_moon disks must intersect in exactly two points");
    }
  }
  if (clearance(shape, domain) < 0.5 * shape.radius) {
    throw InvalidArgument("shape must keep a clearance of radius/2 from the domain edges");
  }
}

GridTopology::GridTopology(const Rect& domain, int nx, int ny)
    : domain_(domain),
      nx_(nx),
      ny_(ny),
      dx_(domain.width() / (nx - 1)),
      dy_(domain.height() / (ny - 1)) {
  const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  coords_.resize(n);
  neighbors_.resize(n);
  shifted_.assign(n, 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = index(i, j);
      coords_[k] = lattice_point(i, j);
      auto& nb = neighbors_[k];
      nb[kEast] = i + 1 < nx ? static_cast<std::int32_t>(index(i + 1, j)) : kNoNeighbor;
      nb[kWest] = i > 0 ? static_cast<std::int32_t>(index(i - 1, j)) : kNoNeighbor;
      nb[kNorth] = j + 1 < ny ? static_cast<std::int32_t>(index(i, j + 1)) : kNoNeighbor;
      nb[kSouth] = j > 0 ? static_cast<std::int32_t>(index(i, j - 1)) : kNoNeighbor;
    }
  }
}

GridTopology build_uniform_grid(const Rect& domain, int nx, int ny) {
  if (nx < 8 || ny < 8) {
    throw InvalidArgument("grid needs at least 8 nodes per direction (got " + std::to_string(nx) + "x" +
                          std::to_string(ny) + ")");
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw InvalidArgument("domain side lengths must be positive");
  }
  return GridTopology(domain, nx, ny);
}

std::vector<Intersection> find_boundary_intersections(const Shape& shape, const GridTopology& grid) {
  std::vector<Intersection> out;
  if (shape.kind == ShapeKind::none) return out;

  struct Arc {
    Vec2 c;
    double r;
  };
  // For the half moon the outer arc is the part of the outer circle outside the
  // cutter disk, the inner arc the part of the cutter circle inside the outer disk.
  const Arc outer{shape.center, shape.radius};
  const Arc cutter{shape.cutter_center, shape.cutter_radius};
  const bool moon = shape.kind == ShapeKind::half_moon;
  const double tol = 1e-12 * grid.h();

  auto keep = [&](int arc, Vec2 p) {
    if (!moon) return true;
    if (arc == 0) return norm(p - cutter.c) >= cutter.r - tol;
    return norm(p - outer.c) <= outer.r + tol;
  };

  auto scan = [&](int arc, const Arc& a) {
    Vec2 pts[2];
    for (int i = 0; i < grid.nx(); ++i) {
      const double x = grid.lattice_point(i, 0).x;
      const int n = circle_line_crossings(a.c, a.r, x, true, pts);
      for (int m = 0; m < n; ++m)
        if (keep(arc, pts[m])) out.push_back({pts[m], CrossingLine::vertical, i});
    }
    for (int j = 0; j < grid.ny(); ++j) {
      const double y = grid.lattice_point(0, j).y;
      const int n = circle_line_crossings(a.c, a.r, y, false, pts);
      for (int m = 0; m < n; ++m)
        if (keep(arc, pts[m])) out.push_back({pts[m], CrossingLine::horizontal, j});
    }
  };

  scan(0, outer);
  if (moon) {
    scan(1, cutter);
    // Both arcs pass through the corners: keep one entry per corner.
    for (const Vec2 corner : shape.corners()) {
      bool seen = false;
      std::erase_if(out, [&](const Intersection& s) {
        if (norm(s.point - corner) > tol) return false;
        const bool drop = seen;
        seen = true;
        return drop;
      });
      if (!seen) out.push_back({corner, CrossingLine::corner, -1});
    }
  }
  return out;
}

ShiftResult apply_point_shift(const GridTopology& grid, std::span<const Intersection> intersections) {
  ShiftResult result{grid, {}};
  const Rect& dom = grid.domain();
  const double tie = 1e-12 * grid.h();

  // node -> index of the winning intersection
  std::vector<std::int64_t> claim(grid.size(), -1);
  std::vector<double> claim_dist(grid.size(), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> nearest(intersections.size());

  for (std::size_t m = 0; m < intersections.size(); ++m) {
    const Vec2 p = intersections[m].point;
    const int i = static_cast<int>(std::lround((p.x - dom.x0) / grid.dx()));
    const int j = static_cast<int>(std::lround((p.y - dom.y0) / grid.dy()));
    if (i <= 0 || j <= 0 || i >= grid.nx() - 1 || j >= grid.ny() - 1) {
      throw GeometryError("boundary crossing at (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") maps to a domain-edge node");
    }
    const std::size_t k = grid.index(i, j);
    nearest[m] = k;
    const double d = norm(p - grid.lattice_point(i, j));
    const std::int64_t prev = claim[k];
    bool wins = prev < 0 || d < claim_dist[k] - tie;
    if (!wins && prev >= 0 && std::abs(d - claim_dist[k]) <= tie) {
      wins = lex_less(p, intersections[static_cast<std::size_t>(prev)].point);
    }
    if (wins) {
      claim[k] = static_cast<std::int64_t>(m);
      claim_dist[k] = d;
    }
  }

  for (std::size_t m = 0; m < intersections.size(); ++m) {
    const std::size_t k = nearest[m];
    if (claim[k] == static_cast<std::int64_t>(m)) {
      result.grid.shift_node(k, intersections[m].point);
    } else {
      const Vec2 p = intersections[m].point;
      const Vec2 q = intersections[static_cast<std::size_t>(claim[k])].point;
      if (norm(p - q) > tie) result.dropped.push_back(intersections[m]);
    }
  }
  return result;
}

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::exterior: return "exterior";
    case NodeClass::boundary: return "boundary";
    case NodeClass::ghost: return "ghost";
    case NodeClass::deep_interior: return "deep_interior";
  }
  return "exterior";
}

NodeClass parse_node_class(std::string_view name) {
  if (name == "exterior") return NodeClass::exterior;
  if (name == "boundary") return NodeClass::boundary;
  if (name == "ghost") return NodeClass::ghost;
  if (name == "deep_interior") return NodeClass::deep_interior;
  throw InvalidArgument("unknown node class '" + std::string(name) + "'");
}

std::vector<NodeClass> classify_nodes(const GridTopology& grid, std::span<const double> phi) {
  if (phi.size() != grid.size()) throw InvalidArgument("phi size does not match the grid");
  const std::size_t n = grid.size();
  std::vector<NodeClass> cls(n, NodeClass::exterior);
  for (std::size_t k = 0; k < n; ++k) {
    if (grid.shifted(k))
      cls[k] = NodeClass::boundary;
    else if (phi[k] > 0.0)
      cls[k] = NodeClass::deep_interior;
  }
  auto outside = [&](std::int32_t nb) {
    return nb != kNoNeighbor && (cls[static_cast<std::size_t>(nb)] == NodeClass::exterior ||
                                 cls[static_cast<std::size_t>(nb)] == NodeClass::boundary);
  };
  std::vector<std::size_t> ghosts;
  for (std::size_t k = 0; k < n; ++k) {
    if (cls[k] != NodeClass::deep_interior) continue;
    for (const auto nb : grid.neighbors(k)) {
      if (outside(nb)) {
        ghosts.push_back(k);
        break;
      }
    }
  }
  for (const std::size_t k : ghosts) cls[k] = NodeClass::ghost;

  // Every ghost node must reach an exterior node within two lattice hops.
  for (const std::size_t k : ghosts) {
    bool found = false;
    for (const auto nb : grid.neighbors(k)) {
      if (nb == kNoNeighbor) continue;
      if (cls[static_cast<std::size_t>(nb)] == NodeClass::exterior) found = true;
      for (const auto nb2 : grid.neighbors(static_cast<std::size_t>(nb))) {
        if (nb2 != kNoNeighbor && cls[static_cast<std::size_t>(nb2)] == NodeClass::exterior) found = true;
      }
    }
    if (!found) {
      throw GeometryError("ghost node (" + std::to_string(grid.i_of(k)) + ", " + std::to_string(grid.j_of(k)) +
                          ") has no exterior node within its stencil's stencil");
    }
  }
  return cls;
}

}  // namespace pecfdtd
