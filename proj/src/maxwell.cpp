#include "pecfdtd/maxwell.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "pecfdtd/parallel.hpp"

namespace pecfdtd {

Scene::Scene(const Shape& shape, const Rect& domain, int nx, int ny, const SceneOptions& opts) : shape_(shape) {
  validate_shape(shape, domain);
  GridTopology lattice = build_uniform_grid(domain, nx, ny);
  const std::size_t n = lattice.size();

  if (!has_pec()) {
    grid_ = std::move(lattice);
    fits_ = FitTable(grid_);
    ls_.phi.assign(n, -std::numeric_limits<double>::infinity());
    ls_.normal.assign(n, Vec2{1.0, 0.0});
    ls_.tangent.assign(n, Vec2{0.0, -1.0});
    classes_.assign(n, NodeClass::exterior);
  } else {
    const auto crossings = find_boundary_intersections(shape, lattice);
    ShiftResult shifted = apply_point_shift(lattice, crossings);
    grid_ = std::move(shifted.grid);
    dropped_ = std::move(shifted.dropped);
    fits_ = FitTable(grid_);
    const auto phi0 = initialize_phi(shape, grid_);
    ls_.phi = redistance(phi0, grid_, fits_, opts.redistance, &redist_);
    classes_ = classify_nodes(grid_, ls_.phi);
    compute_normals_tangents(grid_, fits_, classes_, ls_);
    ext_.emplace(grid_, fits_, ls_, classes_, opts.extension);
  }

  for (std::size_t k = 0; k < n; ++k) {
    const NodeClass c = classes_[k];
    if (c == NodeClass::boundary) boundary_.push_back(k);
    if (c != NodeClass::exterior && c != NodeClass::boundary) continue;
    live_.push_back(k);
    if (fits_.has(k))
      updated_.push_back(k);
    else
      outer_.push_back(k);
  }
  // One ghost layer suffices: no updated node may see the deep interior.
  for (const std::size_t k : updated_) {
    for (const auto m : fits_.stencil(k)) {
      if (classes_[m] == NodeClass::deep_interior) {
        throw GeometryError("node (" + std::to_string(grid_.i_of(k)) + ", " + std::to_string(grid_.j_of(k)) +
                            ") has a deep-interior stencil member");
      }
    }
  }
}

void maxwell_sweep(const Scene& scene, const FieldState& in, FieldState& out, SchemeDirection dir, double dt) {
  const double sdt = dir == SchemeDirection::forward ? dt : -dt;
  const FitTable& fits = scene.fits();
  const auto nodes = scene.updated_nodes();
  out.hx = in.hx;
  out.hy = in.hy;
  out.ez = in.ez;
  out.time = in.time + sdt;
  parallel_for(nodes.size(), [&](std::size_t a) {
    const std::size_t k = nodes[a];
    assert(scene.classes()[k] == NodeClass::exterior || scene.classes()[k] == NodeClass::boundary);
    const FitOperator& op = fits.op(k);
    const Stencil5 vhx = fits.gather(k, in.hx);
    const Stencil5 vhy = fits.gather(k, in.hy);
    const Stencil5 vez = fits.gather(k, in.ez);
    const Gradient ghx = fitted_gradient(op, vhx);
    const Gradient ghy = fitted_gradient(op, vhy);
    const Gradient gez = fitted_gradient(op, vez);
    out.hx[k] = fitted_value(op, vhx) - sdt * gez.dy;
    out.hy[k] = fitted_value(op, vhy) + sdt * gez.dx;
    out.ez[k] = fitted_value(op, vez) + sdt * (ghy.dx - ghx.dy);
  });
}

void enforce_boundary(const Scene& scene, FieldState& state) {
  const auto& normal = scene.levelset().normal;
  for (const std::size_t k : scene.boundary_nodes()) {
    const Vec2 nk = normal[k];
    const double hn = state.hx[k] * nk.x + state.hy[k] * nk.y;
    state.hx[k] -= hn * nk.x;
    state.hy[k] -= hn * nk.y;
    state.ez[k] = 0.0;
  }
}

void apply_outer_boundary(const Scene& scene, FieldState& state, double omega) {
  const GridTopology& grid = scene.grid();
  for (const std::size_t k : scene.outer_nodes()) {
    const Vec2 p = grid.coord(k);
    const WaveSample w = incident_wave(p.x, p.y, state.time, omega);
    state.hx[k] = w.hx;
    state.hy[k] = w.hy;
    state.ez[k] = w.ez;
  }
}

void prepare_ghosts(const Scene& scene, FieldState& state) {
  if (!scene.has_pec()) return;
  enforce_boundary(scene, state);
  scene.extension()->extend_all(state.hx, state.hy, state.ez);
}

FieldState initial_state(const Scene& scene, double omega) {
  const GridTopology& grid = scene.grid();
  FieldState s(grid.size(), 0.0);
  for (const std::size_t k : scene.live_nodes()) {
    const Vec2 p = grid.coord(k);
    const WaveSample w = incident_wave(p.x, p.y, 0.0, omega);
    s.hx[k] = w.hx;
    s.hy[k] = w.hy;
    s.ez[k] = w.ez;
  }
  if (scene.has_pec()) enforce_boundary(scene, s);
  return s;
}

void bfecc_step(const Scene& scene, FieldState& state, double dt, double omega, StepWorkspace& ws) {
  // (1) forward
  prepare_ghosts(scene, state);
  maxwell_sweep(scene, state, ws.forward, SchemeDirection::forward, dt);
  apply_outer_boundary(scene, ws.forward, omega);

  // (2) backward with the time-reversed system
  prepare_ghosts(scene, ws.forward);
  maxwell_sweep(scene, ws.forward, ws.backward, SchemeDirection::backward, dt);
  ws.backward.time = state.time;
  apply_outer_boundary(scene, ws.backward, omega);

  // (3) compensate and solve forward again
  ws.compensated = state;
  for (const std::size_t k : scene.live_nodes()) {
    ws.compensated.hx[k] = state.hx[k] + 0.5 * (state.hx[k] - ws.backward.hx[k]);
    ws.compensated.hy[k] = state.hy[k] + 0.5 * (state.hy[k] - ws.backward.hy[k]);
    ws.compensated.ez[k] = state.ez[k] + 0.5 * (state.ez[k] - ws.backward.ez[k]);
  }
  prepare_ghosts(scene, ws.compensated);
  const double t_next = state.time + dt;
  maxwell_sweep(scene, ws.compensated, state, SchemeDirection::forward, dt);
  state.time = t_next;
  apply_outer_boundary(scene, state, omega);
  if (scene.has_pec()) enforce_boundary(scene, state);
}

void plain_step(const Scene& scene, FieldState& state, double dt, double omega, StepWorkspace& ws) {
  prepare_ghosts(scene, state);
  maxwell_sweep(scene, state, ws.forward, SchemeDirection::forward, dt);
  apply_outer_boundary(scene, ws.forward, omega);
  if (scene.has_pec()) enforce_boundary(scene, ws.forward);
  std::swap(state, ws.forward);
}

bool all_finite(const Scene& scene, const FieldState& state) {
  auto ok = [&](std::size_t k) {
    return std::isfinite(state.hx[k]) && std::isfinite(state.hy[k]) && std::isfinite(state.ez[k]);
  };
  for (const std::size_t k : scene.live_nodes())
    if (!ok(k)) return false;
  if (const auto* ext = scene.extension())
    for (const std::size_t k : ext->ghost_nodes())
      if (!ok(k)) return false;
  return true;
}

RunResult run_simulation(const RunParams& p) {
  if (p.cells < 7) throw InvalidArgument("cells must be at least 7");
  if (!(p.cfl > 0.0)) throw InvalidArgument("cfl must be positive");
  if (!(p.final_time >= 0.0)) throw InvalidArgument("final_time must be non-negative");

  RunResult r;
  r.scene = std::make_unique<Scene>(p.shape, p.domain, p.cells + 1, p.cells + 1, p.scene);
  const Scene& scene = *r.scene;
  const double dt = p.cfl * scene.grid().dx();

  r.state = initial_state(scene, p.omega);
  apply_outer_boundary(scene, r.state, p.omega);
  StepWorkspace ws;

  const long nsteps = static_cast<long>(std::ceil(p.final_time / dt - 1e-9));
  for (long step = 0; step < nsteps; ++step) {
    const double t_next = step + 1 == nsteps ? p.final_time : (step + 1) * dt;
    const double h = t_next - r.state.time;
    if (p.scheme == TimeScheme::bfecc)
      bfecc_step(scene, r.state, h, p.omega, ws);
    else
      plain_step(scene, r.state, h, p.omega, ws);
    r.state.time = t_next;
    if (!all_finite(scene, r.state)) {
      throw StabilityError(step + 1, "non-finite field values at step " + std::to_string(step + 1) +
                                         " (t = " + std::to_string(t_next) + ")");
    }
    r.steps = step + 1;
    if (p.on_snapshot && p.snapshot_every > 0 && (step + 1) % p.snapshot_every == 0 && step + 1 != nsteps)
      p.on_snapshot(scene, r.state, step + 1);
  }
  if (p.on_snapshot) p.on_snapshot(scene, r.state, r.steps);
  return r;
}

}  // namespace pecfdtd
