#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pecfdtd/config.hpp"
#include "pecfdtd/maxwell.hpp"

namespace pecfdtd {

using Logger = std::function<void(const std::string&)>;

/// Exterior nodes with -band <= phi < 0. `band` is a physical length, so the
/// same annulus is sampled on every grid of a study. Throws if empty.
std::vector<std::size_t> sampling_mask(const Scene& scene, double band);

/// Bilinear interpolation of a fine-grid nodal field at p, locating the cell on
/// the unshifted lattice. Throws InvalidArgument outside the domain.
double interpolate_reference(const Scene& fine, std::span<const double> field, Vec2 p);
std::vector<double> interpolate_reference(const Scene& fine, std::span<const double> field,
                                          std::span<const Vec2> points);

/// Mean absolute difference.
double l1_error(std::span<const double> a, std::span<const double> b);

/// order_k = log2(E_k / E_{k+1}) / log2(N_{k+1} / N_k) between consecutive
/// grids; nullopt where either error is missing or non-positive.
std::vector<std::optional<double>> observed_orders(std::span<const int> cells,
                                                   std::span<const std::optional<double>> errors);

struct ErrorRow {
  int cells = 0;
  std::size_t samples = 0;
  std::array<std::optional<double>, 2> error{};
  std::array<std::optional<double>, 2> order{};  ///< relative to the previous row
  std::string failure;                           ///< non-empty if the run failed
};

struct ErrorReport {
  std::array<std::string, 2> fields{"Ez", "Hx(Bx)"};
  std::string title;
  int reference_cells = 0;
  double band = 0.0;
  std::vector<ErrorRow> rows;

  /// Fills the order columns from the error columns.
  void compute_orders();
};

/// Runs every grid in cfg.grids plus cfg.reference_grid, samples the band
/// around the PEC (band_width coarsest-grid cells wide) and reports l1 errors of
/// Ez and Hx against the interpolated reference. A failing grid is recorded and
/// the others still run.
ErrorReport convergence_study(const SimulationConfig& cfg, const Logger& log = {});

/// Free-space (no PEC) errors of Ez and Hy against the analytic plane wave over
/// all interior nodes, with the given time scheme.
ErrorReport freespace_study(const SimulationConfig& cfg, TimeScheme scheme, const Logger& log = {});

struct LevelSetDiagnostics {
  double band = 0.0;  ///< physical half-width of the inspected band
  std::size_t samples = 0;
  double max_gradient_deviation = 0.0;  ///< max | |grad phi| - 1 |
  std::optional<double> max_distance_error;  ///< vs the exact distance (circle only)
  std::vector<double> bin_edges;             ///< histogram of |grad phi|
  std::vector<std::size_t> counts;
};

/// Inspects nodes with |phi| <= band_cells * dx that carry a fit operator.
LevelSetDiagnostics levelset_diagnostics(const Scene& scene, double band_cells = 5.0, int bins = 10);
std::string format_diagnostics(const LevelSetDiagnostics& d);

std::string format_report(const ErrorReport& report);
void write_report_csv(const ErrorReport& report, const std::filesystem::path& path);

}  // namespace pecfdtd
