#include "pecfdtd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pecfdtd {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double to_double(const std::string& key, const std::string& word) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size())
    throw ConfigError(key, "config key '" + key + "': '" + word + "' is not a number");
  return v;
}

int to_int(const std::string& key, const std::string& word) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size())
    throw ConfigError(key, "config key '" + key + "': '" + word + "' is not an integer");
  return v;
}

std::vector<double> numbers(const std::string& key, std::string_view value, std::size_t count) {
  const auto words = split_words(value);
  if (words.size() != count)
    throw ConfigError(key, "config key '" + key + "' expects " + std::to_string(count) + " values");
  std::vector<double> out;
  for (const auto& w : words) out.push_back(to_double(key, w));
  return out;
}

double number(const std::string& key, std::string_view value) { return numbers(key, value, 1)[0]; }

int integer(const std::string& key, std::string_view value) {
  const auto words = split_words(value);
  if (words.size() != 1) throw ConfigError(key, "config key '" + key + "' expects one integer");
  return to_int(key, words[0]);
}

bool boolean(const std::string& key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key, "config key '" + key + "' expects true or false");
}

}  // namespace

RunParams SimulationConfig::run_params(int cells) const {
  RunParams p;
  p.shape = shape;
  p.domain = domain;
  p.cells = cells;
  p.cfl = cfl;
  p.omega = omega;
  p.final_time = final_time;
  p.scheme = scheme;
  p.scene = scene;
  p.snapshot_every = snapshot_every;
  return p;
}

SimulationConfig parse_config(std::string_view text) {
  SimulationConfig cfg;
  std::string_view rest = text;
  int line_no = 0;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(key, "config key '" + key + "' has no value");

    if (key == "domain") {
      const auto v = numbers(key, value, 4);
      cfg.domain = {v[0], v[1], v[2], v[3]};
    } else if (key == "grids") {
      cfg.grids.clear();
      for (const auto& w : split_words(value)) cfg.grids.push_back(to_int(key, w));
    } else if (key == "grid") {
      cfg.grid = integer(key, value);
    } else if (key == "reference_grid") {
      cfg.reference_grid = integer(key, value);
    } else if (key == "cfl") {
      cfg.cfl = number(key, value);
    } else if (key == "omega") {
      cfg.omega = number(key, value);
    } else if (key == "wavelength") {
      cfg.omega = 2.0 * 3.14159265358979323846 / number(key, value);
    } else if (key == "final_time") {
      cfg.final_time = number(key, value);
    } else if (key == "shape") {
      try {
        cfg.shape.kind = parse_shape_kind(value);
      } catch (const InvalidArgument& e) {
        throw ConfigError(key, "shape: " + std::string(e.what()));
      }
    } else if (key == "center") {
      const auto v = numbers(key, value, 2);
      cfg.shape.center = {v[0], v[1]};
    } else if (key == "radius") {
      cfg.shape.radius = number(key, value);
    } else if (key == "cutter_center") {
      const auto v = numbers(key, value, 2);
      cfg.shape.cutter_center = {v[0], v[1]};
    } else if (key == "cutter_radius") {
      cfg.shape.cutter_radius = number(key, value);
    } else if (key == "band_width") {
      cfg.band_width = number(key, value);
    } else if (key == "snapshot_every") {
      cfg.snapshot_every = integer(key, value);
    } else if (key == "vtk") {
      cfg.vtk = boolean(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else if (key == "scheme") {
      if (value == "bfecc")
        cfg.scheme = TimeScheme::bfecc;
      else if (value == "plain")
        cfg.scheme = TimeScheme::plain;
      else
        throw ConfigError(key, "config key 'scheme' must be bfecc or plain");
    } else if (key == "parallel_grids") {
      cfg.parallel_grids = boolean(key, value);
    } else if (key == "redistance_cfl") {
      cfg.scene.redistance.pseudo_cfl = number(key, value);
    } else if (key == "redistance_tol") {
      cfg.scene.redistance.tol = number(key, value);
    } else if (key == "redistance_max_iter") {
      cfg.scene.redistance.max_iter = integer(key, value);
    } else if (key == "redistance_band") {
      cfg.scene.redistance.band = number(key, value);
    } else if (key == "extension_cfl") {
      cfg.scene.extension.pseudo_cfl = number(key, value);
    } else if (key == "extension_steps") {
      cfg.scene.extension.steps = integer(key, value);
    } else {
      throw ConfigError(key, "unknown config key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "config not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const SimulationConfig& cfg) {
  if (!(cfg.domain.width() > 0.0) || !(cfg.domain.height() > 0.0))
    throw ConfigError("domain", "domain side lengths must be positive");
  if (cfg.grids.empty()) throw ConfigError("grids", "grids must list at least one size");
  for (const int g : cfg.grids)
    if (g < 7) throw ConfigError("grids", "grid sizes must be at least 7 cells");
  if (cfg.grid != 0 && cfg.grid < 7) throw ConfigError("grid", "grid must be at least 7 cells");
  if (cfg.reference_grid < 7) throw ConfigError("reference_grid", "reference_grid must be at least 7 cells");
  if (!(cfg.cfl > 0.0)) throw ConfigError("cfl", "cfl must be positive");
  if (!(cfg.omega > 0.0)) throw ConfigError("omega", "omega must be positive");
  if (!(cfg.final_time >= 0.0)) throw ConfigError("final_time", "final_time must be non-negative");
  if (!(cfg.band_width > 0.0)) throw ConfigError("band_width", "band_width must be positive");
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every", "snapshot_every must be non-negative");
  if (!(cfg.scene.redistance.pseudo_cfl > 0.0)) throw ConfigError("redistance_cfl", "redistance_cfl must be positive");
  if (!(cfg.scene.redistance.tol > 0.0)) throw ConfigError("redistance_tol", "redistance_tol must be positive");
  if (!(cfg.scene.extension.pseudo_cfl > 0.0)) throw ConfigError("extension_cfl", "extension_cfl must be positive");
  if (cfg.scene.extension.steps < 0) throw ConfigError("extension_steps", "extension_steps must be non-negative");
  try {
    validate_shape(cfg.shape, cfg.domain);
  } catch (const InvalidArgument& e) {
    throw ConfigError("shape", "shape: " + std::string(e.what()));
  }
  if (cfg.shape.kind != ShapeKind::none && cfg.final_time > clearance(cfg.shape, cfg.domain)) {
    throw ConfigError("final_time", "final_time " + std::to_string(cfg.final_time) +
                                        " exceeds the causality bound " +
                                        std::to_string(clearance(cfg.shape, cfg.domain)) +
                                        " (scattered wave would reach the outer boundary)");
  }
}

}  // namespace pecfdtd
