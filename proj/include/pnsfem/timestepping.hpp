#pragma once

#include <string>
#include <vector>

#include "pnsfem/forms.hpp"
#include "pnsfem/newton.hpp"

namespace pnsfem {

// Uniform grid t_k = k*tau on [0,T], tau = T/K.
struct TimeGrid {
  double T = 1.0;
  int K = 1;

  double tau() const { return T / K; }
  double time(int k) const { return k * (T / K); }
};

// One implicit step: everything the nonlinear solve needs except the states.
struct StepProblem {
  const MixedSpace* space = nullptr;
  const StressModel* model = nullptr;
  SourceTerm rhs;
  BoundaryTrace trace;  // empty means homogeneous Dirichlet
  Convection conv = Convection::on;
  NewtonConfig newton;
  AssemblyOptions opts;
};

// Energy bookkeeping of one computed step.
struct StepRecord {
  int k = 0;
  double t = 0.0;
  bool converged = false;
  int newton_iters = 0;
  int damping_steps = 0;
  double final_residual = 0.0;
  double kinetic = 0.0;          // 1/2 ||u^k||_M^2
  double dissipation_inc = 0.0;  // tau <[S]u^k, u^k>
  double work_inc = 0.0;         // tau <[f]^tau_k, u^k>
  double squared_inc = 0.0;      // 1/2 ||u^k - u^(k-1)||_M^2
  double temam_diag = 0.0;       // <Bhat u^k, u^k>, zero up to rounding
  double identity_gap = 0.0;     // step energy identity residual
  double divergence = 0.0;       // ||div u^k||_L2
};

struct Trajectory {
  std::vector<DiscreteState> states;  // levels 0..K when completed
  std::vector<StepRecord> records;
  TimeGrid grid;
  double initial_kinetic = 0.0;
  bool completed = false;
  std::string failure;
};

std::vector<double> backward_difference(const std::vector<double>& xk,
                                        const std::vector<double>& xkm1, double tau);

// Solve the implicit equation for level k from the previous state.
DiscreteState step(const StepProblem& prob, const DiscreteState& prev, const TimeGrid& grid, int k,
                   NewtonStats* stats = nullptr);

// March all K steps; on a failed step the partial trajectory is returned with
// completed = false.
Trajectory run(const StepProblem& prob, const DiscreteState& initial, const TimeGrid& grid);

enum class InterpolantKind { constant, affine };

// Evaluate the piecewise interpolant of the computed trajectory at time t.
// The constant interpolant is right-continuous: value x^k on ((k-1)tau, k*tau].
DiscreteState interpolant_eval(const Trajectory& traj, double t, InterpolantKind kind);

// (d x^k, x^k)_M - 1/2 d ||x^k||_M^2 - tau/2 ||d x^k||_M^2 with the backward
// difference d; identically zero in exact arithmetic for any mass matrix.
double difference_identity_gap(const SparseMatrixCSR& mass, const std::vector<double>& xk,
                               const std::vector<double>& xkm1, double tau);

// Cumulative energy ledger: lhs_l = 1/2||u^l||^2 + sum_{k<=l} tau<[S]u^k,u^k>,
// rhs_l = 1/2||u^0||^2 + sum_{k<=l} tau<[f]u^k>.  The implicit scheme keeps
// lhs <= rhs up to the accumulated nonlinear solver tolerance.
struct EnergyLedger {
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> slack;           // rhs - lhs, per level
  std::vector<double> squared_cum;     // sum of squared increments, per level
  double max_violation = 0.0;          // max(0, lhs - rhs)
};

EnergyLedger stability_report(const Trajectory& traj);

void write_state(const DiscreteState& state, int k, std::ostream& out);
DiscreteState read_state(std::istream& in, int* k_out = nullptr);
void write_state_file(const DiscreteState& state, int k, const std::string& path);
DiscreteState read_state_file(const std::string& path, int* k_out = nullptr);

}  // namespace pnsfem
