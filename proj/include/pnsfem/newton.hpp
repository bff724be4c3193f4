#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pnsfem/sparse.hpp"

namespace pnsfem {

struct NewtonConfig {
  double abs_tol = 1e-8;
  double rel_tol = 1e-10;  // relative to the initial residual
  int max_iter = 50;
  int max_halvings = 20;
};

struct NewtonStats {
  bool converged = false;
  int iterations = 0;
  int damping_steps = 0;  // iterations that needed at least one halving
  double initial_residual = 0.0;
  double final_residual = 0.0;
  std::string message;
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;
using JacobianFn = std::function<SparseMatrixCSR(const std::vector<double>&)>;

// Damped Newton in delta form: solve J(x) d = -r(x), backtrack by halving
// until the residual norm decreases, update x in place.
NewtonStats newton_solve(std::vector<double>& x, const ResidualFn& residual,
                         const JacobianFn& jacobian, const NewtonConfig& cfg = {});

double norm2(const std::vector<double>& v);

}  // namespace pnsfem
