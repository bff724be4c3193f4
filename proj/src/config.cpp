#include "pnsfem/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pnsfem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': not a number: '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': not an integer: '" + value + "'");
  }
}

bool parse_onoff(const std::string& key, const std::string& value) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw std::invalid_argument("config key '" + key + "': expected on/off, got '" + value + "'");
}

}  // namespace

ExperimentKind kind_from_string(const std::string& name) {
  if (name == "vortex") return ExperimentKind::vortex;
  if (name == "singular") return ExperimentKind::singular;
  if (name == "manufactured") return ExperimentKind::manufactured;
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

std::string kind_to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::vortex: return "vortex";
    case ExperimentKind::singular: return "singular";
    case ExperimentKind::manufactured: return "manufactured";
  }
  return "?";
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ExperimentKind::vortex:
      cfg.x0 = 0.0;
      cfg.y0 = 0.0;
      cfg.x1 = 3.0;
      cfg.y1 = 1.0;
      cfg.nx = 48;
      cfg.ny = 16;
      cfg.p = 11.0 / 5.0;
      cfg.delta = 1e-2;
      cfg.T = 1.0;
      cfg.K = 100;
      cfg.vtk_stride = 10;
      cfg.checkpoint_stride = 10;
      break;
    case ExperimentKind::singular:
      cfg.x0 = -1.0;
      cfg.y0 = -1.0;
      cfg.x1 = 1.0;
      cfg.y1 = 1.0;
      cfg.nx = 2;
      cfg.ny = 2;
      cfg.p = 11.0 / 5.0;
      cfg.delta = 1e-4;
      cfg.T = 0.5;
      cfg.K = 250;
      cfg.vtk_stride = 25;
      cfg.checkpoint_stride = 25;
      break;
    case ExperimentKind::manufactured:
      cfg.x0 = 0.0;
      cfg.y0 = 0.0;
      cfg.x1 = 1.0;
      cfg.y1 = 1.0;
      cfg.nx = 2;
      cfg.ny = 2;
      cfg.p = 2.0;
      cfg.delta = 0.0;
      cfg.T = 0.05;
      cfg.K = 5;
      cfg.convection = false;
      cfg.vtk_stride = 1;
      cfg.checkpoint_stride = 1;
      break;
  }
  return cfg;
}

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment.kind") cfg.kind = kind_from_string(value);
  else if (key == "experiment.family") cfg.family = family_from_string(value);
  else if (key == "experiment.convection") cfg.convection = parse_onoff(key, value);
  else if (key == "experiment.error_variant") {
    if (value == "squared") cfg.error_variant = EFVariant::squared;
    else if (value == "as_written") cfg.error_variant = EFVariant::as_written;
    else throw std::invalid_argument("config key '" + key + "': expected squared/as_written");
  } else if (key == "experiment.initial") {
    if (value == "project") cfg.project_initial = true;
    else if (value == "interpolate") cfg.project_initial = false;
    else throw std::invalid_argument("config key '" + key + "': expected project/interpolate");
  } else if (key == "domain.x0") cfg.x0 = parse_double(key, value);
  else if (key == "domain.y0") cfg.y0 = parse_double(key, value);
  else if (key == "domain.x1") cfg.x1 = parse_double(key, value);
  else if (key == "domain.y1") cfg.y1 = parse_double(key, value);
  else if (key == "mesh.nx") cfg.nx = parse_int(key, value);
  else if (key == "mesh.ny") cfg.ny = parse_int(key, value);
  else if (key == "mesh.level") cfg.level = parse_int(key, value);
  else if (key == "model.p") cfg.p = parse_double(key, value);
  else if (key == "model.delta") cfg.delta = parse_double(key, value);
  else if (key == "time.T") cfg.T = parse_double(key, value);
  else if (key == "time.K") cfg.K = parse_int(key, value);
  else if (key == "newton.abs_tol") cfg.newton.abs_tol = parse_double(key, value);
  else if (key == "newton.rel_tol") cfg.newton.rel_tol = parse_double(key, value);
  else if (key == "newton.max_iter") cfg.newton.max_iter = parse_int(key, value);
  else if (key == "newton.max_halvings") cfg.newton.max_halvings = parse_int(key, value);
  else if (key == "quadrature.degree") cfg.quad_degree = parse_int(key, value);
  else if (key == "quadrature.time_points") cfg.time_quad = parse_int(key, value);
  else if (key == "error.base_degree") cfg.error_base_degree = parse_int(key, value);
  else if (key == "error.graded_levels") cfg.error_graded_levels = parse_int(key, value);
  else if (key == "output.dir") cfg.out_dir = value;
  else if (key == "output.vtk_stride") cfg.vtk_stride = parse_int(key, value);
  else if (key == "output.checkpoint_stride") cfg.checkpoint_stride = parse_int(key, value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  // The kind line must come first so later keys override its defaults.
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": missing '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
    pairs.emplace_back(key, value);
  }

  ExperimentKind kind = ExperimentKind::singular;
  for (const auto& [k, v] : pairs)
    if (k == "experiment.kind") kind = kind_from_string(v);
  ExperimentConfig cfg = default_config(kind);
  for (const auto& [k, v] : pairs) apply_config_line(cfg, k, v);
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return parse_config(in);
}

void serialize_config(const ExperimentConfig& cfg, std::ostream& out) {
  out << "experiment.kind = " << kind_to_string(cfg.kind) << "\n";
  out << "experiment.family = " << family_to_string(cfg.family) << "\n";
  out << "experiment.convection = " << (cfg.convection ? "on" : "off") << "\n";
  out << "experiment.error_variant = "
      << (cfg.error_variant == EFVariant::squared ? "squared" : "as_written") << "\n";
  out << "experiment.initial = " << (cfg.project_initial ? "project" : "interpolate") << "\n";
  out << "domain.x0 = " << format_double(cfg.x0) << "\n";
  out << "domain.y0 = " << format_double(cfg.y0) << "\n";
  out << "domain.x1 = " << format_double(cfg.x1) << "\n";
  out << "domain.y1 = " << format_double(cfg.y1) << "\n";
  out << "mesh.nx = " << cfg.nx << "\n";
  out << "mesh.ny = " << cfg.ny << "\n";
  out << "mesh.level = " << cfg.level << "\n";
  out << "model.p = " << format_double(cfg.p) << "\n";
  out << "model.delta = " << format_double(cfg.delta) << "\n";
  out << "time.T = " << format_double(cfg.T) << "\n";
  out << "time.K = " << cfg.K << "\n";
  out << "newton.abs_tol = " << format_double(cfg.newton.abs_tol) << "\n";
  out << "newton.rel_tol = " << format_double(cfg.newton.rel_tol) << "\n";
  out << "newton.max_iter = " << cfg.newton.max_iter << "\n";
  out << "newton.max_halvings = " << cfg.newton.max_halvings << "\n";
  out << "quadrature.degree = " << cfg.quad_degree << "\n";
  out << "quadrature.time_points = " << cfg.time_quad << "\n";
  out << "error.base_degree = " << cfg.error_base_degree << "\n";
  out << "error.graded_levels = " << cfg.error_graded_levels << "\n";
  out << "output.dir = " << cfg.out_dir << "\n";
  out << "output.vtk_stride = " << cfg.vtk_stride << "\n";
  out << "output.checkpoint_stride = " << cfg.checkpoint_stride << "\n";
}

std::string config_to_string(const ExperimentConfig& cfg) {
  std::ostringstream os;
  serialize_config(cfg, os);
  return os.str();
}

void write_config_file(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  serialize_config(cfg, out);
}

void validate_config(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!(cfg.x1 > cfg.x0) || !(cfg.y1 > cfg.y0)) fail("domain extents must be non-empty");
  if (cfg.nx < 1 || cfg.ny < 1) fail("mesh.nx and mesh.ny must be >= 1");
  if (cfg.level < 1) fail("mesh.level must be >= 1");
  if (!(cfg.p > 1.0)) fail("model.p must be > 1");
  if (cfg.delta < 0.0) fail("model.delta must be >= 0");
  if (!(cfg.T > 0.0)) fail("time.T must be > 0");
  if (cfg.K < 1) fail("time.K must be >= 1");
  if (!(cfg.newton.abs_tol > 0.0) || !(cfg.newton.rel_tol >= 0.0))
    fail("newton tolerances must be positive");
  if (cfg.newton.max_iter < 1) fail("newton.max_iter must be >= 1");
  if (cfg.newton.max_halvings < 0) fail("newton.max_halvings must be >= 0");
  if (cfg.quad_degree < 0 || cfg.quad_degree > 20) fail("quadrature.degree out of range");
  if (cfg.time_quad < 1 || cfg.time_quad > 20) fail("quadrature.time_points out of range");
  if (cfg.error_base_degree < 1 || cfg.error_base_degree > 20)
    fail("error.base_degree out of range");
  if (cfg.error_graded_levels < 0 || cfg.error_graded_levels > 40)
    fail("error.graded_levels out of range");
  if (cfg.vtk_stride < 0 || cfg.checkpoint_stride < 0) fail("output strides must be >= 0");
  if (cfg.out_dir.empty()) fail("output.dir must not be empty");
}

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

}  // namespace pnsfem
