#pragma once

#include <functional>
#include <vector>

#include "pnsfem/constitutive.hpp"
#include "pnsfem/elements.hpp"
#include "pnsfem/sparse.hpp"

namespace pnsfem {

// Coefficients of one time level.
struct DiscreteState {
  std::vector<double> u;   // velocity, interleaved components
  std::vector<double> pr;  // pressure
  double t = 0.0;
};

enum class Convection { off, on };

// Right-hand side f in divergence form: <f,v> = int force.v + int stress_part : Dv.
// Either entry may be empty.  The stress slot admits forcings that are not
// functions, e.g. data manufactured from solutions with singular stress.
struct SourceTerm {
  std::function<Vec2(double t, Point2 x)> force;
  std::function<SymTensor2(double t, Point2 x)> stress_part;
};

using BoundaryTrace = std::function<Vec2(double t, Point2 x)>;

struct AssemblyOptions {
  int quad_degree = 0;  // 0: 2*velocity degree + 4
  int time_quad = 3;    // Gauss points for time-interval means
};

int effective_quad_degree(const AssemblyOptions& opts, ElementFamily family);

// Unknown layout: velocity block, pressure block, one mean-pressure gauge
// multiplier.  system_size = n_u + n_p + 1.
int system_size(const MixedSpace& space);
std::vector<double> pack_state(const MixedSpace& space, const DiscreteState& state,
                               double gauge = 0.0);
DiscreteState unpack_state(const MixedSpace& space, const std::vector<double>& x, double t);

// Mean over the time slab ((k-1)*tau, k*tau] of a scalar function, by Gauss
// quadrature with n_gauss points.
double interval_mean(const std::function<double(double)>& g, double tau, int k, int n_gauss);

// Residual of the implicit step equation at the candidate state: momentum
// rows test d_t u + time-averaged stress + modified convection - pressure
// - time-averaged f; continuity rows test -(div u, q_j) - gauge*m_j; the last
// row tests -sum_j m_j pr_j where m_j = int q_j.  u_prev enters only through
// the difference quotient; pass tau and the slab index k of the step.
std::vector<double> assemble_residual(const MixedSpace& space, const StressModel& model,
                                      const DiscreteState& state,
                                      const std::vector<double>& u_prev, double tau, int k,
                                      const SourceTerm& rhs, Convection conv,
                                      const AssemblyOptions& opts = {}, double gauge = 0.0);

// Derivative of the residual with respect to (u, pr, gauge).  No boundary
// rows are applied here; with convection off the result is symmetric.
SparseMatrixCSR assemble_jacobian(const MixedSpace& space, const StressModel& model,
                                  const DiscreteState& state, double tau, int k, Convection conv,
                                  const AssemblyOptions& opts = {});

// Replace the matrix rows of boundary velocity dofs by identity rows and the
// corresponding rhs entries by the interpolated trace at time t.  Requires
// the diagonal inside the sparsity pattern.
void apply_dirichlet(SparseSystem& sys, const MixedSpace& space, const BoundaryTrace& trace,
                     double t);

// Delta-form variants used inside Newton: identity rows in the matrix,
// r_i = u_i - g_i in the residual.
void constrain_jacobian_rows(SparseMatrixCSR& m, const MixedSpace& space);
void constrain_residual(std::vector<double>& r, const MixedSpace& space,
                        const std::vector<double>& u, const BoundaryTrace& trace, double t);

// Velocity mass matrix (phi_i, phi_j), n_u x n_u, no boundary treatment.
SparseMatrixCSR velocity_mass_matrix(const MixedSpace& space, const AssemblyOptions& opts = {});

// m_j = int q_j dx per pressure dof.
std::vector<double> pressure_moments(const MixedSpace& space, const AssemblyOptions& opts = {});

// Scalar pairings used by the energy ledger.
double stress_power(const MixedSpace& space, const StressModel& model,
                    const std::vector<double>& u, double tau, int k,
                    const AssemblyOptions& opts = {});
double rhs_power(const MixedSpace& space, const SourceTerm& rhs, const std::vector<double>& u,
                 double tau, int k, const AssemblyOptions& opts = {});
double convection_power(const MixedSpace& space, const std::vector<double>& u,
                        const std::vector<double>& v, const AssemblyOptions& opts = {});
double divergence_l2(const MixedSpace& space, const std::vector<double>& u,
                     const AssemblyOptions& opts = {});

// Initial data: constrained L2 projection onto the discretely divergence-free
// set (a mass saddle solve with the trace of u0 on the boundary), or plain
// nodal interpolation.
DiscreteState project_initial_state(const MixedSpace& space, const std::function<Vec2(Point2)>& u0,
                                    const AssemblyOptions& opts = {});
DiscreteState interpolate_initial_state(const MixedSpace& space,
                                        const std::function<Vec2(Point2)>& u0);

}  // namespace pnsfem
