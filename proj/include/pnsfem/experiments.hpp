#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pnsfem/analysis.hpp"
#include "pnsfem/config.hpp"

namespace pnsfem {

// Everything a run needs beyond the mesh: model, data, exact solution.
struct ExperimentSetup {
  StressModel model;
  SourceTerm rhs;
  BoundaryTrace trace;  // empty: homogeneous Dirichlet
  std::function<Vec2(Point2)> initial_velocity;
  ExactSolution exact;  // velocity empty when no exact solution is known
  ErrorQuadratureOptions error_quad;

  bool has_exact() const { return static_cast<bool>(exact.velocity); }
};

ExperimentSetup make_setup(const ExperimentConfig& cfg);

// Base rectangle refined (level-1) times.
Mesh build_experiment_mesh(const ExperimentConfig& cfg);

// Initial data for Example 1: one vortex per region, built from a
// polynomial stream function and normalized to the requested peak speeds.
struct VortexRegion {
  double rx0, ry0, rx1, ry1;  // region rectangle
  double scale;               // peak speed
  double gamma;               // resolved amplitude
};
std::vector<VortexRegion> vortex_regions(const ExperimentConfig& cfg);
std::function<Vec2(Point2)> vortex_initial_velocity(const ExperimentConfig& cfg);

double singular_alpha(double p);  // 6/5 - 2/p
ExactSolution make_singular_exact(double p);
ExactSolution make_manufactured_exact();

struct RunResult {
  Trajectory traj;
  double h = 0.0;
  bool has_errors = false;
  double e_l2 = 0.0;
  double e_f = 0.0;
  std::string out_dir;  // empty when nothing was written
};

// Executes the configured experiment and writes checkpoints, the energy
// ledger, VTK snapshots, and (when an exact solution exists) an error report
// into cfg.out_dir.  Solver failure throws after retaining partial outputs.
RunResult run_experiment(const ExperimentConfig& cfg);

// Runs levels n_min..n_max of the configured experiment and assembles the
// error table.  A level failure aborts with the partial report written.
ConvergenceReport convergence_sweep(ExperimentConfig cfg, int n_min, int n_max);
ConvergenceReport assemble_report(const ExperimentConfig& cfg, const std::vector<int>& levels,
                                  const std::vector<double>& hs,
                                  const std::vector<double>& e_l2,
                                  const std::vector<double>& e_f);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;      // observed worst case
  double threshold = 0.0;  // pass iff value <= threshold
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass = false;
};

// Fast invariant suite: skew-symmetry, difference identity, Jacobian vs
// finite differences, quadrature exactness, slab means, stability ledger.
VerifyReport verify(const ExperimentConfig& cfg);
void write_verify_report(const VerifyReport& report, std::ostream& out);

}  // namespace pnsfem
