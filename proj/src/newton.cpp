#include "pnsfem/newton.hpp"

#include <cmath>

namespace pnsfem {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

NewtonStats newton_solve(std::vector<double>& x, const ResidualFn& residual,
                         const JacobianFn& jacobian, const NewtonConfig& cfg) {
  NewtonStats st;
  std::vector<double> r = residual(x);
  double rnorm = norm2(r);
  st.initial_residual = rnorm;
  const double target = std::max(cfg.abs_tol, cfg.rel_tol * rnorm);

  for (st.iterations = 0; st.iterations < cfg.max_iter; ++st.iterations) {
    if (rnorm <= target || !std::isfinite(rnorm)) break;

    SparseMatrixCSR j = jacobian(x);
    std::vector<double> neg_r(r.size());
    for (size_t i = 0; i < r.size(); ++i) neg_r[i] = -r[i];
    std::vector<double> delta = sparse_factor_solve(j, neg_r);

    // Backtracking: accept the first step that strictly decreases the norm.
    double lambda = 1.0;
    bool accepted = false;
    std::vector<double> trial(x.size());
    for (int h = 0; h <= cfg.max_halvings; ++h) {
      for (size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + lambda * delta[i];
      std::vector<double> rt = residual(trial);
      const double rtnorm = norm2(rt);
      if (std::isfinite(rtnorm) && rtnorm < rnorm) {
        x = trial;
        r = std::move(rt);
        rnorm = rtnorm;
        accepted = true;
        if (h > 0) ++st.damping_steps;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      st.final_residual = rnorm;
      st.message = "line search stalled at iteration " + std::to_string(st.iterations);
      return st;
    }
  }

  st.final_residual = rnorm;
  st.converged = std::isfinite(rnorm) && rnorm <= target;
  if (!st.converged && st.message.empty())
    st.message = "no convergence within " + std::to_string(cfg.max_iter) + " iterations";
  return st;
}

}  // namespace pnsfem
