#pragma once

#include <iosfwd>
#include <string>

#include "pnsfem/analysis.hpp"
#include "pnsfem/elements.hpp"
#include "pnsfem/newton.hpp"

namespace pnsfem {

enum class ExperimentKind { vortex, singular, manufactured };

ExperimentKind kind_from_string(const std::string& name);
std::string kind_to_string(ExperimentKind kind);

// Flat key/value configuration; see docs/config.md for the grammar.  The
// defaults of each experiment kind reproduce the published setups.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::singular;
  ElementFamily family = ElementFamily::Mini;
  bool convection = true;
  EFVariant error_variant = EFVariant::squared;
  bool project_initial = true;  // else nodal interpolation

  double x0 = -1.0, y0 = -1.0, x1 = 1.0, y1 = 1.0;
  int nx = 2, ny = 2;
  int level = 1;  // n; the base mesh refined (n-1) times

  double p = 2.2;
  double delta = 1e-4;

  double T = 0.5;
  int K = 250;

  NewtonConfig newton;
  int quad_degree = 0;  // 0: automatic per family
  int time_quad = 3;

  int error_base_degree = 12;
  int error_graded_levels = 14;

  std::string out_dir = "out";
  int vtk_stride = 25;
  int checkpoint_stride = 25;

  double tau() const { return T / K; }
};

ExperimentConfig default_config(ExperimentKind kind);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void serialize_config(const ExperimentConfig& cfg, std::ostream& out);
std::string config_to_string(const ExperimentConfig& cfg);
void write_config_file(const ExperimentConfig& cfg, const std::string& path);

// Throws std::invalid_argument with a message naming the offending key.
void validate_config(const ExperimentConfig& cfg);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace pnsfem
