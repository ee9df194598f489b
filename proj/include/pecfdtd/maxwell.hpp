#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pecfdtd/geometry.hpp"
#include "pecfdtd/ghost_extension.hpp"
#include "pecfdtd/levelset.hpp"
#include "pecfdtd/lsq_stencil.hpp"

namespace pecfdtd {

/// Collocated TMz fields (eps = mu = 1) at one time level.
struct FieldState {
  std::vector<double> hx;
  std::vector<double> hy;
  std::vector<double> ez;
  double time = 0.0;

  FieldState() = default;
  explicit FieldState(std::size_t n, double t = 0.0) : hx(n, 0.0), hy(n, 0.0), ez(n, 0.0), time(t) {}
  std::size_t size() const { return ez.size(); }
};

enum class SchemeDirection { forward, backward };

struct WaveSample {
  double hx = 0.0;
  double hy = 0.0;
  double ez = 0.0;
};

/// Plane wave travelling in +x: Ez = sin(w (x - t)), Hx = 0, Hy = -Ez.
inline WaveSample incident_wave(double x, double /*y*/, double t, double omega) {
  const double s = std::sin(omega * (x - t));
  return {0.0, -s, s};
}

struct SceneOptions {
  RedistanceOptions redistance{};
  ExtensionOptions extension{};
};

/// Everything that depends only on geometry: shifted grid, fits, level set,
/// node classes, the ghost extension tables and the node lists the sweeps use.
/// Built once per run and read-only afterwards; not movable because the
/// extension tables refer back into it.
class Scene {
 public:
  Scene(const Shape& shape, const Rect& domain, int nx, int ny, const SceneOptions& opts = {});
  Scene(const Scene&) = delete;
  Scene& operator=(const Scene&) = delete;

  const Shape& shape() const { return shape_; }
  const GridTopology& grid() const { return grid_; }
  const FitTable& fits() const { return fits_; }
  const LevelSetData& levelset() const { return ls_; }
  std::span<const NodeClass> classes() const { return classes_; }
  bool has_pec() const { return shape_.kind != ShapeKind::none; }
  const GhostExtension* extension() const { return ext_ ? &*ext_ : nullptr; }

  /// Exterior and boundary nodes with a full stencil: the nodes a sweep writes.
  std::span<const std::size_t> updated_nodes() const { return updated_; }
  /// Nodes without a full stencil (outer ring), driven by the incident wave.
  std::span<const std::size_t> outer_nodes() const { return outer_; }
  std::span<const std::size_t> boundary_nodes() const { return boundary_; }
  /// Exterior and boundary nodes (where the solution lives).
  std::span<const std::size_t> live_nodes() const { return live_; }
  std::span<const Intersection> dropped_intersections() const { return dropped_; }
  const RedistanceReport& redistance_report() const { return redist_; }

 private:
  Shape shape_;
  GridTopology grid_;
  FitTable fits_;
  LevelSetData ls_;
  std::vector<NodeClass> classes_;
  std::vector<Intersection> dropped_;
  RedistanceReport redist_;
  std::optional<GhostExtension> ext_;
  std::vector<std::size_t> updated_, outer_, boundary_, live_;
};

/// One step of the least-squares hybrid scheme: fitted values replace nodal
/// values and fitted gradients replace central differences. The backward
/// direction is the time-reversed system (all spatial terms negated), so it is
/// identical to a forward sweep with -dt. Only updated nodes are written; the
/// remaining entries of `out` are copied from `in`.
void maxwell_sweep(const Scene& scene, const FieldState& in, FieldState& out, SchemeDirection dir, double dt);

/// Ez = 0 and H.n = 0 (tangential projection) at boundary nodes.
void enforce_boundary(const Scene& scene, FieldState& state);

/// Incident wave at the state's time on every node lacking a full stencil.
void apply_outer_boundary(const Scene& scene, FieldState& state, double omega);

/// Boundary enforcement followed by ghost extension of H and Ez (no-op without PEC).
void prepare_ghosts(const Scene& scene, FieldState& state);

/// Total field at t = 0: incident wave on exterior and boundary nodes (then
/// boundary enforcement), zero inside the PEC.
FieldState initial_state(const Scene& scene, double omega);

enum class TimeScheme { bfecc, plain };

/// Reusable buffers for bfecc_step.
struct StepWorkspace {
  FieldState forward, backward, compensated;
};

/// Forward, backward, compensate e = (U - U~)/2, forward again; ghosts are
/// regenerated before every sweep. Returns U^{n+1} with boundary conditions
/// enforced.
void bfecc_step(const Scene& scene, FieldState& state, double dt, double omega, StepWorkspace& ws);

/// Underlying first-order scheme alone (ghosts, one forward sweep, outer ring).
void plain_step(const Scene& scene, FieldState& state, double dt, double omega, StepWorkspace& ws);

/// True when every live and ghost node holds finite values.
bool all_finite(const Scene& scene, const FieldState& state);

struct RunParams {
  Shape shape;
  Rect domain{};
  int cells = 100;        ///< cells per direction; nodes = cells + 1
  double cfl = 1.0;       ///< dt / dx with dx the unshifted spacing
  double omega = 0.0;
  double final_time = 1.0;
  TimeScheme scheme = TimeScheme::bfecc;
  SceneOptions scene{};
  /// Called after every `snapshot_every` steps (and at the end) when set.
  int snapshot_every = 0;
  std::function<void(const Scene&, const FieldState&, long step)> on_snapshot;
};

struct RunResult {
  std::unique_ptr<Scene> scene;
  FieldState state;
  long steps = 0;
};

/// Builds the scene, initializes the fields and steps to final_time (the last
/// step is shortened to land on it exactly). Throws StabilityError on NaN/Inf.
RunResult run_simulation(const RunParams& params);

}  // namespace pecfdtd
