#include "pecfdtd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

namespace pecfdtd {

std::vector<std::size_t> sampling_mask(const Scene& scene, double band) {
  std::vector<std::size_t> out;
  const auto& phi = scene.levelset().phi;
  const auto classes = scene.classes();
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (classes[k] == NodeClass::exterior && phi[k] < 0.0 && phi[k] >= -band) out.push_back(k);
  }
  if (out.empty()) throw GeometryError("sampling band contains no exterior nodes");
  return out;
}

double interpolate_reference(const Scene& fine, std::span<const double> field, Vec2 p) {
  const GridTopology& g = fine.grid();
  const Rect& d = g.domain();
  const double slack = 1e-12 * g.h();
  if (p.x < d.x0 - slack || p.x > d.x1 + slack || p.y < d.y0 - slack || p.y > d.y1 + slack) {
    throw InvalidArgument("reference query (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") lies outside the domain");
  }
  const double u = (p.x - d.x0) / g.dx();
  const double v = (p.y - d.y0) / g.dy();
  const int i = std::clamp(static_cast<int>(std::floor(u)), 0, g.nx() - 2);
  const int j = std::clamp(static_cast<int>(std::floor(v)), 0, g.ny() - 2);
  const double fx = std::clamp(u - i, 0.0, 1.0);
  const double fy = std::clamp(v - j, 0.0, 1.0);
  const double f00 = field[g.index(i, j)];
  const double f10 = field[g.index(i + 1, j)];
  const double f01 = field[g.index(i, j + 1)];
  const double f11 = field[g.index(i + 1, j + 1)];
  // Exact hits return the nodal value untouched.
  if (fx == 0.0 && fy == 0.0) return f00;
  return (1.0 - fy) * ((1.0 - fx) * f00 + fx * f10) + fy * ((1.0 - fx) * f01 + fx * f11);
}

std::vector<double> interpolate_reference(const Scene& fine, std::span<const double> field,
                                          std::span<const Vec2> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const Vec2 p : points) out.push_back(interpolate_reference(fine, field, p));
  return out;
}

double l1_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("l1_error needs two equal, non-empty samples");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(a[k] - b[k]);
  return sum / static_cast<double>(a.size());
}

std::vector<std::optional<double>> observed_orders(std::span<const int> cells,
                                                   std::span<const std::optional<double>> errors) {
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const auto& coarse = errors[k - 1];
    const auto& fine = errors[k];
    if (!coarse || !fine || !(*coarse > 0.0) || !(*fine > 0.0)) continue;
    const double ratio = static_cast<double>(cells[k]) / static_cast<double>(cells[k - 1]);
    out[k] = std::log2(*coarse / *fine) / std::log2(ratio);
  }
  return out;
}

void ErrorReport::compute_orders() {
  std::vector<int> cells;
  for (const auto& r : rows) cells.push_back(r.cells);
  for (int f = 0; f < 2; ++f) {
    std::vector<std::optional<double>> errs;
    for (const auto& r : rows) errs.push_back(r.error[f]);
    const auto orders = observed_orders(cells, errs);
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k].order[f] = orders[k];
  }
}

namespace {

struct GridRun {
  RunResult result;
  std::string failure;
  double seconds = 0.0;
};

GridRun run_grid(const SimulationConfig& cfg, int cells, TimeScheme scheme) {
  GridRun out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    RunParams p = cfg.run_params(cells);
    p.scheme = scheme;
    out.result = run_simulation(p);
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<GridRun> run_all(const SimulationConfig& cfg, const std::vector<int>& sizes, TimeScheme scheme,
                             const Logger& log) {
  std::vector<GridRun> runs(sizes.size());
  auto report = [&](std::size_t k) {
    if (!log) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "grid %d: %s (%.1f s)", sizes[k],
                  runs[k].failure.empty() ? "done" : ("FAILED: " + runs[k].failure).c_str(), runs[k].seconds);
    log(buf);
  };
  if (cfg.parallel_grids) {
    std::vector<std::future<GridRun>> futures;
    for (const int n : sizes) futures.push_back(std::async(std::launch::async, run_grid, std::cref(cfg), n, scheme));
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      runs[k] = futures[k].get();
      report(k);
    }
  } else {
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      runs[k] = run_grid(cfg, sizes[k], scheme);
      report(k);
    }
  }
  return runs;
}

}  // namespace

ErrorReport convergence_study(const SimulationConfig& cfg, const Logger& log) {
  if (cfg.shape.kind == ShapeKind::none) throw ConfigError("shape", "convergence study needs a PEC shape");
  if (cfg.grids.size() < 2) throw ConfigError("grids", "convergence study needs at least two grid sizes");
  if (!std::is_sorted(cfg.grids.begin(), cfg.grids.end()))
    throw ConfigError("grids", "grid sizes must be increasing");
  if (cfg.reference_grid < 2 * cfg.grids.back())
    throw ConfigError("reference_grid", "reference_grid must be at least twice the largest study grid");

  std::vector<int> sizes = cfg.grids;
  sizes.push_back(cfg.reference_grid);
  auto runs = run_all(cfg, sizes, cfg.scheme, log);
  GridRun& ref = runs.back();
  if (!ref.failure.empty()) throw Error("reference grid " + std::to_string(cfg.reference_grid) + " failed: " + ref.failure);

  ErrorReport rep;
  rep.title = std::string(to_string(cfg.shape.kind)) + ", dt/dx = " + std::to_string(cfg.cfl).substr(0, 4) +
              ", T = " + std::to_string(cfg.final_time).substr(0, 4);
  rep.reference_cells = cfg.reference_grid;
  rep.band = cfg.band_width * cfg.domain.width() / cfg.grids.front();
  const Scene& fine = *ref.result.scene;

  for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
    ErrorRow row;
    row.cells = cfg.grids[k];
    row.failure = runs[k].failure;
    if (row.failure.empty()) {
      const Scene& scene = *runs[k].result.scene;
      const FieldState& s = runs[k].result.state;
      const auto mask = sampling_mask(scene, rep.band);
      std::vector<Vec2> pts;
      std::vector<double> ez, hx;
      for (const std::size_t m : mask) {
        pts.push_back(scene.grid().coord(m));
        ez.push_back(s.ez[m]);
        hx.push_back(s.hx[m]);
      }
      row.samples = mask.size();
      row.error[0] = l1_error(ez, interpolate_reference(fine, ref.result.state.ez, pts));
      row.error[1] = l1_error(hx, interpolate_reference(fine, ref.result.state.hx, pts));
    }
    rep.rows.push_back(std::move(row));
  }
  rep.compute_orders();
  return rep;
}

ErrorReport freespace_study(const SimulationConfig& cfg, TimeScheme scheme, const Logger& log) {
  SimulationConfig free = cfg;
  free.shape = Shape::none();
  auto runs = run_all(free, free.grids, scheme, log);

  ErrorReport rep;
  rep.fields = {"Ez", "Hy"};
  rep.title = std::string("free space, ") + (scheme == TimeScheme::bfecc ? "bfecc" : "plain") +
              ", dt/dx = " + std::to_string(cfg.cfl).substr(0, 4) + ", T = " + std::to_string(cfg.final_time).substr(0, 4);
  for (std::size_t k = 0; k < free.grids.size(); ++k) {
    ErrorRow row;
    row.cells = free.grids[k];
    row.failure = runs[k].failure;
    if (row.failure.empty()) {
      const Scene& scene = *runs[k].result.scene;
      const FieldState& s = runs[k].result.state;
      std::vector<double> ez, hy, ez_exact, hy_exact;
      for (const std::size_t m : scene.updated_nodes()) {
        const Vec2 p = scene.grid().coord(m);
        const WaveSample w = incident_wave(p.x, p.y, s.time, cfg.omega);
        ez.push_back(s.ez[m]);
        hy.push_back(s.hy[m]);
        ez_exact.push_back(w.ez);
        hy_exact.push_back(w.hy);
      }
      row.samples = ez.size();
      row.error[0] = l1_error(ez, ez_exact);
      row.error[1] = l1_error(hy, hy_exact);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.compute_orders();
  return rep;
}

LevelSetDiagnostics levelset_diagnostics(const Scene& scene, double band_cells, int bins) {
  if (!scene.has_pec()) throw InvalidArgument("level-set diagnostics need a PEC shape");
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  const GridTopology& g = scene.grid();
  const auto& phi = scene.levelset().phi;
  const auto grad = gradient_magnitude(g, scene.fits(), phi);
  const Shape& shape = scene.shape();
  const bool exact = shape.kind == ShapeKind::circle;

  LevelSetDiagnostics d;
  d.band = band_cells * g.h();
  std::vector<double> sample;
  double dist_err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!scene.fits().has(k) || std::abs(phi[k]) > d.band) continue;
    sample.push_back(grad[k]);
    d.max_gradient_deviation = std::max(d.max_gradient_deviation, std::abs(grad[k] - 1.0));
    if (exact) {
      const double sd = shape.radius - norm(g.coord(k) - shape.center);
      dist_err = std::max(dist_err, std::abs(phi[k] - sd));
    }
  }
  d.samples = sample.size();
  if (sample.empty()) throw GeometryError("level-set band contains no nodes");
  if (exact) d.max_distance_error = dist_err;

  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi - lo < 1e-12) {
    lo -= 0.5e-3;
    hi += 0.5e-3;
  }
  d.counts.assign(bins, 0);
  for (int b = 0; b <= bins; ++b) d.bin_edges.push_back(lo + (hi - lo) * b / bins);
  for (const double v : sample) {
    const int b = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
    ++d.counts[b];
  }
  return d;
}

std::string format_diagnostics(const LevelSetDiagnostics& d) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "band |phi| <= %.4g, %zu nodes\n", d.band, d.samples);
  os << buf;
  std::snprintf(buf, sizeof buf, "max | |grad phi| - 1 | = %.4e\n", d.max_gradient_deviation);
  os << buf;
  if (d.max_distance_error) {
    std::snprintf(buf, sizeof buf, "max |phi - exact distance| = %.4e\n", *d.max_distance_error);
    os << buf;
  }
  os << "|grad phi| histogram\n";
  std::size_t peak = 1;
  for (const auto c : d.counts) peak = std::max(peak, c);
  for (std::size_t b = 0; b < d.counts.size(); ++b) {
    const int bar = static_cast<int>(40 * d.counts[b] / peak);
    std::snprintf(buf, sizeof buf, "  [%.5f, %.5f) %7zu %s\n", d.bin_edges[b], d.bin_edges[b + 1], d.counts[b],
                  std::string(bar, '#').c_str());
    os << buf;
  }
  return os.str();
}

std::string format_report(const ErrorReport& r) {
  std::ostringstream os;
  char buf[256];
  if (!r.title.empty()) os << r.title << '\n';
  if (r.reference_cells > 0) {
    std::snprintf(buf, sizeof buf, "reference grid %d, sampling band %.4g\n", r.reference_cells, r.band);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%6s %9s  %-12s %-7s  %-12s %-7s\n", "grid", "samples", (r.fields[0] + " err").c_str(),
                "order", (r.fields[1] + " err").c_str(), "order");
  os << buf;
  auto num = [](const std::optional<double>& v, const char* fmt) {
    if (!v) return std::string("--");
    char b[32];
    std::snprintf(b, sizeof b, fmt, *v);
    return std::string(b);
  };
  for (const auto& row : r.rows) {
    if (!row.failure.empty()) {
      std::snprintf(buf, sizeof buf, "%6d  FAILED: %s\n", row.cells, row.failure.c_str());
      os << buf;
      continue;
    }
    std::snprintf(buf, sizeof buf, "%6d %9zu  %-12s %-7s  %-12s %-7s\n", row.cells, row.samples,
                  num(row.error[0], "%.3e").c_str(), num(row.order[0], "%.2f").c_str(),
                  num(row.error[1], "%.3e").c_str(), num(row.order[1], "%.2f").c_str());
    os << buf;
  }
  return os.str();
}

void write_report_csv(const ErrorReport& r, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "grid,samples," << r.fields[0] << "_error," << r.fields[0] << "_order," << r.fields[1] << "_error,"
      << r.fields[1] << "_order,status\n";
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char b[32];
    std::snprintf(b, sizeof b, "%.17g", *v);
    return std::string(b);
  };
  for (const auto& row : r.rows) {
    out << row.cells << ',' << row.samples << ',' << num(row.error[0]) << ',' << num(row.order[0]) << ','
        << num(row.error[1]) << ',' << num(row.order[1]) << ',' << (row.failure.empty() ? "ok" : "failed") << '\n';
  }
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace pecfdtd
