#include "pnsfem/timestepping.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace pnsfem {

namespace {

double mass_dot(const SparseMatrixCSR& m, const std::vector<double>& a,
                const std::vector<double>& b) {
  std::vector<double> mb;
  m.multiply(b, mb);
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * mb[i];
  return s;
}

}  // namespace

std::vector<double> backward_difference(const std::vector<double>& xk,
                                        const std::vector<double>& xkm1, double tau) {
  if (xk.size() != xkm1.size()) throw std::invalid_argument("backward_difference: size mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("backward_difference: tau must be positive");
  std::vector<double> d(xk.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = (xk[i] - xkm1[i]) / tau;
  return d;
}

DiscreteState step(const StepProblem& prob, const DiscreteState& prev, const TimeGrid& grid, int k,
                   NewtonStats* stats) {
  const MixedSpace& sp = *prob.space;
  const double tau = grid.tau();
  const double tk = grid.time(k);

  auto residual = [&](const std::vector<double>& x) {
    DiscreteState s = unpack_state(sp, x, tk);
    std::vector<double> r = assemble_residual(sp, *prob.model, s, prev.u, tau, k, prob.rhs,
                                              prob.conv, prob.opts, x.back());
    constrain_residual(r, sp, s.u, prob.trace, tk);
    return r;
  };
  auto jacobian = [&](const std::vector<double>& x) {
    DiscreteState s = unpack_state(sp, x, tk);
    SparseMatrixCSR j = assemble_jacobian(sp, *prob.model, s, tau, k, prob.conv, prob.opts);
    constrain_jacobian_rows(j, sp);
    return j;
  };

  std::vector<double> x = pack_state(sp, prev, 0.0);
  NewtonStats st = newton_solve(x, residual, jacobian, prob.newton);
  if (stats) *stats = st;
  if (!st.converged)
    throw std::runtime_error("step " + std::to_string(k) + ": Newton failed (" + st.message + ")");
  return unpack_state(sp, x, tk);
}

Trajectory run(const StepProblem& prob, const DiscreteState& initial, const TimeGrid& grid) {
  const MixedSpace& sp = *prob.space;
  if (static_cast<int>(initial.u.size()) != sp.n_u)
    throw std::invalid_argument("run: initial state does not match the space");
  if (grid.K < 1 || !(grid.T > 0.0)) throw std::invalid_argument("run: bad time grid");

  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(static_cast<size_t>(grid.K) + 1);
  traj.states.push_back(initial);
  traj.states[0].t = 0.0;

  const SparseMatrixCSR mass = velocity_mass_matrix(sp, prob.opts);
  const double tau = grid.tau();
  traj.initial_kinetic = 0.5 * mass_dot(mass, initial.u, initial.u);
  double kin_prev = traj.initial_kinetic;

  for (int k = 1; k <= grid.K; ++k) {
    NewtonStats st;
    DiscreteState next;
    try {
      next = step(prob, traj.states.back(), grid, k, &st);
    } catch (const std::exception& e) {
      traj.completed = false;
      traj.failure = e.what();
      return traj;
    }

    StepRecord rec;
    rec.k = k;
    rec.t = grid.time(k);
    rec.converged = st.converged;
    rec.newton_iters = st.iterations;
    rec.damping_steps = st.damping_steps;
    rec.final_residual = st.final_residual;
    rec.kinetic = 0.5 * mass_dot(mass, next.u, next.u);
    std::vector<double> diff(next.u.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = next.u[i] - traj.states.back().u[i];
    rec.squared_inc = 0.5 * mass_dot(mass, diff, diff);
    rec.dissipation_inc = tau * stress_power(sp, *prob.model, next.u, tau, k, prob.opts);
    rec.work_inc = tau * rhs_power(sp, prob.rhs, next.u, tau, k, prob.opts);
    rec.temam_diag =
        prob.conv == Convection::on ? convection_power(sp, next.u, next.u, prob.opts) : 0.0;
    rec.identity_gap = rec.kinetic - kin_prev + rec.squared_inc + rec.dissipation_inc - rec.work_inc;
    rec.divergence = divergence_l2(sp, next.u, prob.opts);
    traj.records.push_back(rec);

    kin_prev = rec.kinetic;
    traj.states.push_back(std::move(next));
  }
  traj.completed = true;
  return traj;
}

DiscreteState interpolant_eval(const Trajectory& traj, double t, InterpolantKind kind) {
  if (traj.states.empty()) throw std::invalid_argument("interpolant_eval: empty trajectory");
  const double tau = traj.grid.tau();
  const int kmax = static_cast<int>(traj.states.size()) - 1;
  if (t <= 0.0) {
    DiscreteState s = traj.states[0];
    s.t = t;
    return s;
  }
  // Slab index with a rounding guard so t = k*tau lands on level k.
  int k = static_cast<int>(std::ceil(t / tau - 1e-12));
  k = std::min(std::max(k, 1), kmax);
  if (kind == InterpolantKind::constant) {
    DiscreteState s = traj.states[k];
    s.t = t;
    return s;
  }
  const double theta = std::min(1.0, std::max(0.0, (t - (k - 1) * tau) / tau));
  DiscreteState s;
  s.t = t;
  s.u.resize(traj.states[k].u.size());
  s.pr.resize(traj.states[k].pr.size());
  for (size_t i = 0; i < s.u.size(); ++i)
    s.u[i] = (1.0 - theta) * traj.states[k - 1].u[i] + theta * traj.states[k].u[i];
  for (size_t i = 0; i < s.pr.size(); ++i)
    s.pr[i] = (1.0 - theta) * traj.states[k - 1].pr[i] + theta * traj.states[k].pr[i];
  return s;
}

double difference_identity_gap(const SparseMatrixCSR& mass, const std::vector<double>& xk,
                               const std::vector<double>& xkm1, double tau) {
  const std::vector<double> d = backward_difference(xk, xkm1, tau);
  const double lhs = mass_dot(mass, d, xk);
  const double nk = mass_dot(mass, xk, xk);
  const double nkm1 = mass_dot(mass, xkm1, xkm1);
  const double rhs = 0.5 * (nk - nkm1) / tau + 0.5 * tau * mass_dot(mass, d, d);
  return lhs - rhs;
}

EnergyLedger stability_report(const Trajectory& traj) {
  EnergyLedger led;
  double diss = 0.0, work = 0.0, sq = 0.0;
  for (const StepRecord& r : traj.records) {
    diss += r.dissipation_inc;
    work += r.work_inc;
    sq += r.squared_inc;
    led.lhs.push_back(r.kinetic + diss);
    led.rhs.push_back(traj.initial_kinetic + work);
    led.slack.push_back(led.rhs.back() - led.lhs.back());
    led.squared_cum.push_back(sq);
    led.max_violation = std::max(led.max_violation, led.lhs.back() - led.rhs.back());
  }
  led.max_violation = std::max(led.max_violation, 0.0);
  return led;
}

void write_state(const DiscreteState& state, int k, std::ostream& out) {
  out.precision(17);
  out << k << " " << state.t << " " << state.u.size() << " " << state.pr.size() << "\n";
  for (double v : state.u) out << v << "\n";
  for (double v : state.pr) out << v << "\n";
}

DiscreteState read_state(std::istream& in, int* k_out) {
  int k = 0;
  size_t nu = 0, np = 0;
  DiscreteState s;
  in >> k >> s.t >> nu >> np;
  if (!in) throw std::runtime_error("state read: bad header");
  s.u.resize(nu);
  s.pr.resize(np);
  for (size_t i = 0; i < nu; ++i) in >> s.u[i];
  for (size_t i = 0; i < np; ++i) in >> s.pr[i];
  if (!in) throw std::runtime_error("state read: truncated coefficients");
  if (k_out) *k_out = k;
  return s;
}

void write_state_file(const DiscreteState& state, int k, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_state(state, k, out);
}

DiscreteState read_state_file(const std::string& path, int* k_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_state(in, k_out);
}

}  // namespace pnsfem
