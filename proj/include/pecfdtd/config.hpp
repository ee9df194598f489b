#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pecfdtd/maxwell.hpp"

namespace pecfdtd {

/// Malformed or inconsistent configuration; key() names the offending field.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string key, const std::string& what) : InvalidArgument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SimulationConfig {
  Rect domain{0.0, 0.0, 10.0, 10.0};
  std::vector<int> grids{100, 200, 400};  ///< cells per direction
  int grid = 0;                           ///< single-run size; 0 means grids.front()
  int reference_grid = 800;
  double cfl = 1.0;
  double omega = 2.0 * 3.14159265358979323846 / 0.6;
  double final_time = 1.0;
  Shape shape{ShapeKind::circle, {5.0, 5.0}, 2.0, {6.2, 5.0}, 2.0};  ///< cutter used by half_moon only
  double band_width = 10.0;  ///< error band in units of the coarsest dx
  int snapshot_every = 0;
  bool vtk = false;
  std::string output_dir = "output";
  TimeScheme scheme = TimeScheme::bfecc;
  bool parallel_grids = false;
  SceneOptions scene{};

  int run_grid() const { return grid > 0 ? grid : grids.front(); }
  RunParams run_params(int cells) const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);

/// Checks sizes, positivity, shape clearance and the causality bound
/// final_time <= clearance (the scattered wave must not reach the outer ring).
void validate_config(const SimulationConfig& cfg);

}  // namespace pecfdtd
