#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pecfdtd/common.hpp"
#include "pecfdtd/config.hpp"
#include "pecfdtd/field_io.hpp"
#include "pecfdtd/harness.hpp"

namespace fs = std::filesystem;
using namespace pecfdtd;

namespace {

struct Options {
  std::string config;
  std::string output_dir;
  int threads = 0;
  bool quiet = false;
};

// --output-dir beats PEC_OUTPUT_DIR beats the config file.
fs::path resolve_output_dir(const Options& o, const SimulationConfig& cfg) {
  if (!o.output_dir.empty()) return o.output_dir;
  if (const char* env = std::getenv("PEC_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

Logger make_logger(const Options& o) {
  if (o.quiet) return {};
  return [](const std::string& s) { std::cerr << s << '\n'; };
}

std::string snapshot_name(long step, const char* ext) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.%s", step, ext);
  return buf;
}

int cmd_run(const Options& o, const SimulationConfig& cfg) {
  const fs::path out = resolve_output_dir(o, cfg);
  RunParams p = cfg.run_params(cfg.run_grid());
  if (cfg.snapshot_every > 0) {
    p.on_snapshot = [&](const Scene& scene, const FieldState& s, long step) {
      export_field(scene, s, out / snapshot_name(step, "csv"));
      if (cfg.vtk) export_field_vtk(scene, s, out / snapshot_name(step, "vtk"));
    };
  }
  const RunResult r = run_simulation(p);
  export_field(*r.scene, r.state, out / "field.csv");
  if (cfg.vtk) export_field_vtk(*r.scene, r.state, out / "field.vtk");
  export_grid(*r.scene, out / "grid.csv");
  if (r.scene->has_pec()) export_levelset(*r.scene, out / "levelset.csv");
  if (!o.quiet) {
    std::printf("grid %d, %ld steps to t = %.6g, %zu boundary nodes, %zu dropped intersections\n", p.cells, r.steps,
                r.state.time, r.scene->boundary_nodes().size(), r.scene->dropped_intersections().size());
    std::printf("fields written to %s\n", out.string().c_str());
  }
  return 0;
}

int cmd_convergence(const Options& o, const SimulationConfig& cfg) {
  const fs::path out = resolve_output_dir(o, cfg);
  const ErrorReport rep = convergence_study(cfg, make_logger(o));
  write_report_csv(rep, out / "convergence.csv");
  const std::string text = format_report(rep);
  if (FILE* f = std::fopen((out / "convergence.txt").c_str(), "w")) {
    std::fputs(text.c_str(), f);
    std::fclose(f);
  }
  if (!o.quiet) std::fputs(text.c_str(), stdout);
  bool failed = false;
  for (const auto& row : rep.rows) failed = failed || !row.failure.empty();
  return failed ? 1 : 0;
}

int cmd_freespace(const Options& o, const SimulationConfig& cfg) {
  const fs::path out = resolve_output_dir(o, cfg);
  bool failed = false;
  for (const TimeScheme s : {TimeScheme::plain, TimeScheme::bfecc}) {
    const ErrorReport rep = freespace_study(cfg, s, make_logger(o));
    write_report_csv(rep, out / (std::string("freespace_") + (s == TimeScheme::plain ? "plain" : "bfecc") + ".csv"));
    if (!o.quiet) std::fputs((format_report(rep) + "\n").c_str(), stdout);
    for (const auto& row : rep.rows) failed = failed || !row.failure.empty();
  }
  return failed ? 1 : 0;
}

int cmd_redistance(const Options& o, const SimulationConfig& cfg) {
  const int cells = cfg.run_grid();
  Scene scene(cfg.shape, cfg.domain, cells + 1, cells + 1, cfg.scene);
  const LevelSetDiagnostics d = levelset_diagnostics(scene);
  const RedistanceReport& rr = scene.redistance_report();
  if (!o.quiet) {
    std::printf("grid %d, %d redistancing iterations, last update %.3e\n", cells, rr.iterations, rr.max_update);
    std::fputs(format_diagnostics(d).c_str(), stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D TMz Maxwell solver around PEC objects on point-shifted grids"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--output-dir", o.output_dir, "output directory (overrides PEC_OUTPUT_DIR and the config)");
  app.add_option("--threads", o.threads, "worker thread cap")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", o.quiet, "suppress progress and tables");

  auto* run = app.add_subcommand("run", "single simulation with snapshots");
  auto* conv = app.add_subcommand("convergence", "grid refinement study against a fine reference");
  auto* redist = app.add_subcommand("redistance", "level-set diagnostics");
  auto* free = app.add_subcommand("freespace", "plain vs BFECC order check without a PEC");
  for (auto* sub : {run, conv, redist, free}) sub->add_option("config", o.config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << app.help();
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  SimulationConfig cfg;
  try {
    cfg = load_config(o.config);
  } catch (const ConfigError& e) {
    std::cerr << app.help();
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (o.threads > 0) set_thread_count(o.threads);

  try {
    if (run->parsed()) return cmd_run(o, cfg);
    if (conv->parsed()) return cmd_convergence(o, cfg);
    if (redist->parsed()) return cmd_redistance(o, cfg);
    return cmd_freespace(o, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
