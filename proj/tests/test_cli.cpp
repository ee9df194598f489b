#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(PECFDTD_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[512];
  while (std::fgets(buf, sizeof buf, p)) o.out += buf;
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string last_line(const std::string& s) {
  const auto end = s.find_last_not_of('\n');
  const auto start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "pecfdtd_cli_test";
  fs::create_directories(dir);
  std::ofstream(dir / name) << text;
  return dir / name;
}

}  // namespace

TEST_CASE("missing config") {
  const Outcome o = cli("run missing.cfg");
  CHECK(o.code == 2);
  CHECK(last_line(o.out) == "error: config not found: missing.cfg");
}

TEST_CASE("unknown subcommand and malformed config") {
  CHECK(cli("explode " CONFIG_DIR "/circle.cfg").code == 2);
  CHECK(cli("").code == 2);
  const Outcome bad = cli("run " + write_config("bad.cfg", "cfl = 1\nflux_capacitor = on\n").string());
  CHECK(bad.code == 2);
  CHECK(last_line(bad.out).find("error: unknown config key 'flux_capacitor'") == 0);
}

TEST_CASE("redistance diagnostics") {
  const Outcome o = cli("redistance " CONFIG_DIR "/circle.cfg");
  REQUIRE(o.code == 0);
  const auto at = o.out.find("max | |grad phi| - 1 | = ");
  REQUIRE(at != std::string::npos);
  const double dev = std::stod(o.out.substr(at + 25));
  CHECK(dev <= 0.05);
}

TEST_CASE("run and convergence write their outputs") {
  const fs::path out = fs::temp_directory_path() / "pecfdtd_cli_test" / "out";
  fs::remove_all(out);
  const fs::path cfg = write_config("small.cfg",
                                    "shape = circle\ngrids = 25 50\ngrid = 50\nreference_grid = 100\n"
                                    "final_time = 0.4\nsnapshot_every = 1\nvtk = true\n");
  CHECK(cli("--quiet --output-dir " + out.string() + " run " + cfg.string()).code == 0);
  CHECK(fs::exists(out / "field.csv"));
  CHECK(fs::exists(out / "field.vtk"));
  CHECK(fs::exists(out / "grid.csv"));
  CHECK(fs::exists(out / "levelset.csv"));
  CHECK(fs::exists(out / "snapshot_000001.csv"));

  CHECK(cli("convergence " + cfg.string() + " --output-dir " + out.string() + " --threads 2 --quiet").code == 0);
  CHECK(fs::exists(out / "convergence.csv"));
  CHECK(fs::exists(out / "convergence.txt"));
}

TEST_CASE("output directory precedence") {
  const fs::path base = fs::temp_directory_path() / "pecfdtd_cli_test";
  fs::remove_all(base / "env");
  fs::remove_all(base / "flag");
  const fs::path cfg = write_config("fs.cfg", "shape = none\ngrids = 20 40\nfinal_time = 0.2\n");
  const std::string env = "PEC_OUTPUT_DIR=" + (base / "env").string() + " ";
  const std::string cmd = std::string(PECFDTD_CLI) + " --quiet freespace " + cfg.string();
  CHECK(std::system((env + cmd).c_str()) == 0);
  CHECK(fs::exists(base / "env" / "freespace_bfecc.csv"));
  CHECK(std::system((env + cmd + " --output-dir " + (base / "flag").string()).c_str()) == 0);
  CHECK(fs::exists(base / "flag" / "freespace_plain.csv"));
}
