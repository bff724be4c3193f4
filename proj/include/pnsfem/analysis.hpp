#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pnsfem/constitutive.hpp"
#include "pnsfem/timestepping.hpp"

namespace pnsfem {

struct ExactSolution {
  std::function<Vec2(double t, Point2 x)> velocity;
  std::function<Mat2(double t, Point2 x)> velocity_gradient;
  std::function<double(double t, Point2 x)> pressure;  // optional
};

// Plan for the error integrals: a high-degree base rule, with quadrature
// cells near a point singularity split recursively and cells touching it
// graded dyadically toward it.
struct ErrorQuadratureOptions {
  int base_degree = 12;
  bool singular = false;
  Point2 singular_point{0.0, 0.0};
  double radius_one_split = 0.25;  // distance below which cells are split 1:4 once
  double radius_two_splits = 0.1;  // and twice below this
  int graded_levels = 14;          // dyadic grading depth for cells touching the point
};

struct ErrorQuadrature {
  struct PlanPoint {
    Point2 x;  // physical location
    double w;
    double l1, l2;  // reference coordinates in the owning mesh cell
  };
  std::vector<std::vector<PlanPoint>> cells;
  size_t total_points() const;
};

ErrorQuadrature build_error_quadrature(const Mesh& mesh,
                                       const ErrorQuadratureOptions& opts = {});

// Spatial errors of a single coefficient vector at time t.
double velocity_l2_error(const MixedSpace& space, const ErrorQuadrature& quad,
                         const std::vector<double>& u, const ExactSolution& exact, double t);
double natural_distance_error(const MixedSpace& space, const ErrorQuadrature& quad,
                              const StressModel& model, const std::vector<double>& u,
                              const ExactSolution& exact, double t);

// max_k || u(t_k) - u_h^k ||_L2 over all levels 0..K.
double error_l2_max(const MixedSpace& space, const ErrorQuadrature& quad, const Trajectory& traj,
                    const ExactSolution& exact);

// e_F over the trajectory.  `squared` sums tau * ||F(Du(t_k)) - F(Du_h^k)||^2
// and takes the root; `as_written` sums tau * ||.|| before the root.
enum class EFVariant { squared, as_written };
double error_natural(const MixedSpace& space, const ErrorQuadrature& quad,
                     const StressModel& model, const Trajectory& traj,
                     const ExactSolution& exact, EFVariant variant);

// log(e_n/e_{n-1}) / log(h_n/h_{n-1}) for n = 2..len.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double e_l2 = 0.0;
  double eoc_l2 = 0.0;  // NaN in the first row
  double e_f = 0.0;
  double eoc_f = 0.0;
  double eoc_tot = 0.0;  // EOC of e_tot = e_F + e_L2
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::string family;
  double p = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  int K = 0;
  std::string variant;
};

// Column order n,h,e_L2,EOC_L2,e_F,EOC_F,EOC_tot; empty EOC cells in row 1.
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

}  // namespace pnsfem
