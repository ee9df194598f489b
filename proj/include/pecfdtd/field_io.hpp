#pragma once

#include <filesystem>
#include <vector>

#include "pecfdtd/maxwell.hpp"

namespace pecfdtd {

/// CSV `x,y,class,phi,hx,hy,ez`, one row per node in (j, i) row-major order,
/// all reals written with 17 significant digits.
void export_field(const Scene& scene, const FieldState& state, const std::filesystem::path& path);

/// Legacy VTK structured points on the unshifted lattice with nodal phi, hx,
/// hy, ez and the node class as an integer.
void export_field_vtk(const Scene& scene, const FieldState& state, const std::filesystem::path& path);

/// CSV `i,j,x,y,shifted,class`.
void export_grid(const Scene& scene, const std::filesystem::path& path);

/// CSV `x,y,phi,nx,ny`.
void export_levelset(const Scene& scene, const std::filesystem::path& path);

struct FieldTable {
  std::vector<Vec2> coords;
  std::vector<NodeClass> classes;
  std::vector<double> phi;
  FieldState state;
};

/// Reads a file written by export_field.
FieldTable read_field_csv(const std::filesystem::path& path);

}  // namespace pecfdtd
