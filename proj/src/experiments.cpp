#include "pnsfem/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pnsfem/quadrature.hpp"
#include "pnsfem/vtk.hpp"

namespace pnsfem {

namespace {

// Stream-function profile s and derivative; s and s' vanish at 0 and 1, so
// each vortex has zero trace on its region boundary.
double stream_s(double x) { return x * x * (1.0 - x) * (1.0 - x); }
double stream_ds(double x) { return 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x); }

std::string zero_padded(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", k);
  return buf;
}

}  // namespace

double singular_alpha(double p) { return 6.0 / 5.0 - 2.0 / p; }

std::vector<VortexRegion> vortex_regions(const ExperimentConfig& cfg) {
  // Left vortex on the first two thirds of the width (peak speed 1), right
  // vortex on the last third (peak speed 10); the published domain (0,3) x
  // (0,1) gives regions (0,2) and (2,3).
  const double split = cfg.x0 + 2.0 * (cfg.x1 - cfg.x0) / 3.0;
  std::vector<VortexRegion> regions = {
      {cfg.x0, cfg.y0, split, cfg.y1, 1.0, 0.0},
      {split, cfg.y0, cfg.x1, cfg.y1, 10.0, 0.0},
  };
  for (VortexRegion& r : regions) {
    const double lx = r.rx1 - r.rx0, ly = r.ry1 - r.ry0;
    double vmax = 0.0;
    const int samples = 200;
    for (int i = 0; i <= samples; ++i)
      for (int j = 0; j <= samples; ++j) {
        const double xi = static_cast<double>(i) / samples;
        const double eta = static_cast<double>(j) / samples;
        const double vx = stream_s(xi) * stream_ds(eta) / ly;
        const double vy = -stream_ds(xi) * stream_s(eta) / lx;
        vmax = std::max(vmax, std::hypot(vx, vy));
      }
    r.gamma = r.scale / vmax;
  }
  return regions;
}

std::function<Vec2(Point2)> vortex_initial_velocity(const ExperimentConfig& cfg) {
  return [regions = vortex_regions(cfg)](Point2 x) -> Vec2 {
    for (const VortexRegion& r : regions) {
      if (x.x < r.rx0 || x.x > r.rx1 || x.y < r.ry0 || x.y > r.ry1) continue;
      const double lx = r.rx1 - r.rx0, ly = r.ry1 - r.ry0;
      const double xi = (x.x - r.rx0) / lx;
      const double eta = (x.y - r.ry0) / ly;
      return {r.gamma * stream_s(xi) * stream_ds(eta) / ly,
              -r.gamma * stream_ds(xi) * stream_s(eta) / lx};
    }
    return {};
  };
}

ExactSolution make_singular_exact(double p) {
  const double alpha = singular_alpha(p);
  ExactSolution ex;
  ex.velocity = [alpha](double t, Point2 x) -> Vec2 {
    const double r = norm(x);
    const double ra = r > 0.0 ? std::pow(r, alpha - 1.0) : 0.0;
    return {t * t + ra * x.y, t * t - ra * x.x};
  };
  ex.velocity_gradient = [alpha](double, Point2 x) -> Mat2 {
    const double r = norm(x);
    if (r == 0.0) return {};  // singular point, never sampled by quadrature
    const double ra1 = std::pow(r, alpha - 1.0);
    const double ra3 = (alpha - 1.0) * std::pow(r, alpha - 3.0);
    Mat2 g;
    g.a11 = ra3 * x.x * x.y;
    g.a12 = ra3 * x.y * x.y + ra1;
    g.a21 = -ra3 * x.x * x.x - ra1;
    g.a22 = -ra3 * x.x * x.y;
    return g;
  };
  ex.pressure = [](double, Point2) { return 0.0; };
  return ex;
}

ExactSolution make_manufactured_exact() {
  // u = (y^3, x^3): divergence free, cubic so even quadratic velocity spaces
  // keep a nonzero error.  The affine pressure lies in every discrete pressure
  // space, so the velocity error is free of pressure pollution and the sweep
  // sits on the asymptotic rate curve from the coarsest level on.
  ExactSolution ex;
  ex.velocity = [](double, Point2 x) -> Vec2 { return {x.y * x.y * x.y, x.x * x.x * x.x}; };
  ex.velocity_gradient = [](double, Point2 x) -> Mat2 {
    Mat2 g;
    g.a11 = 0.0;
    g.a12 = 3.0 * x.y * x.y;
    g.a21 = 3.0 * x.x * x.x;
    g.a22 = 0.0;
    return g;
  };
  ex.pressure = [](double, Point2 x) { return x.x + x.y - 1.0; };
  return ex;
}

Mesh build_experiment_mesh(const ExperimentConfig& cfg) {
  Mesh mesh = build_rectangle_mesh(cfg.x0, cfg.y0, cfg.x1, cfg.y1, cfg.nx, cfg.ny);
  for (int l = 1; l < cfg.level; ++l) mesh = refine_regular(mesh).first;
  return mesh;
}

ExperimentSetup make_setup(const ExperimentConfig& cfg) {
  ExperimentSetup setup;
  setup.model.p = cfg.p;
  setup.model.delta = cfg.delta;
  setup.error_quad.base_degree = cfg.error_base_degree;
  setup.error_quad.graded_levels = cfg.error_graded_levels;

  const StressModel plain{cfg.p, cfg.delta, {}};
  const bool convect = cfg.convection;

  switch (cfg.kind) {
    case ExperimentKind::vortex: {
      setup.model.nu = [](double t, Point2 x) {
        return t * t + std::exp(-x.x * x.x + x.y * x.y);
      };
      setup.initial_velocity = vortex_initial_velocity(cfg);
      // f = 0, homogeneous Dirichlet trace, no exact solution.
      break;
    }
    case ExperimentKind::singular: {
      setup.exact = make_singular_exact(cfg.p);
      setup.error_quad.singular = true;
      setup.error_quad.singular_point = {0.0, 0.0};
      const ExactSolution ex = setup.exact;
      setup.rhs.force = [](double t, Point2) -> Vec2 { return {2.0 * t, 2.0 * t}; };
      setup.rhs.stress_part = [plain, ex, convect](double t, Point2 x) -> SymTensor2 {
        const SymTensor2 s = stress(plain, t, x, sym(ex.velocity_gradient(t, x)));
        if (!convect) return s;
        const Vec2 u = ex.velocity(t, x);
        return s - sym_outer(u, u);
      };
      setup.trace = [ex](double t, Point2 x) { return ex.velocity(t, x); };
      setup.initial_velocity = [ex](Point2 x) { return ex.velocity(0.0, x); };
      break;
    }
    case ExperimentKind::manufactured: {
      setup.exact = make_manufactured_exact();
      const ExactSolution ex = setup.exact;
      // Steady solution; f carries the pressure gradient pointwise and the
      // stress (and convection) in divergence form.
      setup.rhs.force = [](double, Point2) -> Vec2 { return {1.0, 1.0}; };
      setup.rhs.stress_part = [plain, ex, convect](double t, Point2 x) -> SymTensor2 {
        const SymTensor2 s = stress(plain, t, x, sym(ex.velocity_gradient(t, x)));
        if (!convect) return s;
        const Vec2 u = ex.velocity(t, x);
        return s - sym_outer(u, u);
      };
      setup.trace = [ex](double t, Point2 x) { return ex.velocity(t, x); };
      setup.initial_velocity = [ex](Point2 x) { return ex.velocity(0.0, x); };
      break;
    }
  }
  return setup;
}

namespace {

void write_energy_csv(const Trajectory& traj, const EnergyLedger& led, std::ostream& out) {
  out << "k,t,kinetic,dissipation_inc,work_inc,squared_inc,temam,identity_gap,divergence,"
         "lhs,rhs,slack,newton_iters,damping_steps,final_residual\n";
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return std::string(buf);
  };
  out << "0,0," << num(traj.initial_kinetic) << ",0,0,0,0,0,0," << num(traj.initial_kinetic)
      << "," << num(traj.initial_kinetic) << ",0,0,0,0\n";
  for (size_t i = 0; i < traj.records.size(); ++i) {
    const StepRecord& r = traj.records[i];
    out << r.k << "," << format_double(r.t) << "," << num(r.kinetic) << ","
        << num(r.dissipation_inc) << "," << num(r.work_inc) << "," << num(r.squared_inc) << ","
        << num(r.temam_diag) << "," << num(r.identity_gap) << "," << num(r.divergence) << ","
        << num(led.lhs[i]) << "," << num(led.rhs[i]) << "," << num(led.slack[i]) << ","
        << r.newton_iters << "," << r.damping_steps << "," << num(r.final_residual) << "\n";
  }
}

void write_run_outputs(const ExperimentConfig& cfg, const MixedSpace& space,
                       const Trajectory& traj) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  write_config_file(cfg, (dir / "config.txt").string());
  write_mesh_file(*space.mesh, (dir / "mesh.txt").string());

  {
    std::ofstream out(dir / "energy.csv");
    write_energy_csv(traj, stability_report(traj), out);
  }

  const int kmax = static_cast<int>(traj.states.size()) - 1;
  auto selected = [kmax](int stride, int k) {
    return stride > 0 && (k % stride == 0 || k == kmax);
  };
  for (int k = 0; k <= kmax; ++k) {
    if (selected(cfg.checkpoint_stride, k))
      write_state_file(traj.states[k], k, (dir / ("state_" + zero_padded(k) + ".txt")).string());
    if (selected(cfg.vtk_stride, k))
      emit_fields_file(traj.states[k], space, (dir / ("fields_" + zero_padded(k) + ".vtk")).string());
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const Mesh mesh = build_experiment_mesh(cfg);
  const MixedSpace space = build_space(mesh, cfg.family);
  const ExperimentSetup setup = make_setup(cfg);

  AssemblyOptions opts;
  opts.quad_degree = cfg.quad_degree;
  opts.time_quad = cfg.time_quad;

  const DiscreteState initial = cfg.project_initial
                                    ? project_initial_state(space, setup.initial_velocity, opts)
                                    : interpolate_initial_state(space, setup.initial_velocity);

  StepProblem prob;
  prob.space = &space;
  prob.model = &setup.model;
  prob.rhs = setup.rhs;
  prob.trace = setup.trace;
  prob.conv = cfg.convection ? Convection::on : Convection::off;
  prob.newton = cfg.newton;
  prob.opts = opts;

  const TimeGrid grid{cfg.T, cfg.K};
  Trajectory traj = run(prob, initial, grid);

  RunResult result;
  result.h = mesh.h_max;
  result.out_dir = cfg.out_dir;
  write_run_outputs(cfg, space, traj);
  if (!traj.completed)
    throw std::runtime_error("run_experiment: " + traj.failure + " (partial outputs in " +
                             cfg.out_dir + ")");

  if (setup.has_exact()) {
    const ErrorQuadrature equad = build_error_quadrature(mesh, setup.error_quad);
    result.has_errors = true;
    result.e_l2 = error_l2_max(space, equad, traj, setup.exact);
    result.e_f =
        error_natural(space, equad, setup.model, traj, setup.exact, cfg.error_variant);

    ConvergenceReport report = assemble_report(cfg, {cfg.level}, {result.h}, {result.e_l2},
                                               {result.e_f});
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "report.csv");
    write_convergence_csv(report, out);
  }
  result.traj = std::move(traj);
  return result;
}

ConvergenceReport assemble_report(const ExperimentConfig& cfg, const std::vector<int>& levels,
                                  const std::vector<double>& hs, const std::vector<double>& e_l2,
                                  const std::vector<double>& e_f) {
  ConvergenceReport report;
  report.family = family_to_string(cfg.family);
  report.p = cfg.p;
  report.delta = cfg.delta;
  report.tau = cfg.tau();
  report.K = cfg.K;
  report.variant = cfg.error_variant == EFVariant::squared ? "squared" : "as_written";

  const double floor = 1e-12;  // below this an EOC is quadrature noise
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < levels.size(); ++i) {
    ConvergenceRow row;
    row.n = levels[i];
    row.h = hs[i];
    row.e_l2 = e_l2[i];
    row.e_f = e_f[i];
    row.eoc_l2 = nan;
    row.eoc_f = nan;
    row.eoc_tot = nan;
    if (i > 0) {
      const double lh = std::log(hs[i] / hs[i - 1]);
      if (e_l2[i] > floor && e_l2[i - 1] > floor)
        row.eoc_l2 = std::log(e_l2[i] / e_l2[i - 1]) / lh;
      if (e_f[i] > floor && e_f[i - 1] > floor) row.eoc_f = std::log(e_f[i] / e_f[i - 1]) / lh;
      const double tot = e_l2[i] + e_f[i], tot_prev = e_l2[i - 1] + e_f[i - 1];
      if (tot > floor && tot_prev > floor) row.eoc_tot = std::log(tot / tot_prev) / lh;
    }
    report.rows.push_back(row);
  }
  return report;
}

ConvergenceReport convergence_sweep(ExperimentConfig cfg, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("convergence_sweep: bad level range");
  const ExperimentSetup probe = make_setup(cfg);
  if (!probe.has_exact())
    throw std::invalid_argument("convergence_sweep: experiment has no exact solution");

  namespace fs = std::filesystem;
  const std::string base_dir = cfg.out_dir;
  fs::create_directories(base_dir);

  std::vector<int> levels;
  std::vector<double> hs, el2s, efs;
  std::string failure;
  for (int n = n_min; n <= n_max; ++n) {
    ExperimentConfig level_cfg = cfg;
    level_cfg.level = n;
    level_cfg.out_dir = (fs::path(base_dir) / ("level_" + std::to_string(n))).string();
    try {
      RunResult r = run_experiment(level_cfg);
      levels.push_back(n);
      hs.push_back(r.h);
      el2s.push_back(r.e_l2);
      efs.push_back(r.e_f);
    } catch (const std::exception& e) {
      failure = e.what();
      break;
    }
  }

  ConvergenceReport report = assemble_report(cfg, levels, hs, el2s, efs);
  {
    std::ofstream out(fs::path(base_dir) / "report.csv");
    write_convergence_csv(report, out);
  }
  if (!failure.empty())
    throw std::runtime_error("convergence_sweep: level failed: " + failure +
                             " (partial report in " + base_dir + ")");
  return report;
}

namespace {

VerifyCheck check_temam_skew() {
  VerifyCheck chk{"temam-skew", false, 0.0, 1e-12, "all families, 20 random fields each"};
  std::mt19937 rng(7101);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const Mesh mesh = build_rectangle_mesh(-1.0, -1.0, 1.0, 1.0, 2, 2);
  const double area = 4.0;
  for (ElementFamily fam :
       {ElementFamily::Mini, ElementFamily::TaylorHood, ElementFamily::CrouzeixRaviart}) {
    const MixedSpace sp = build_space(mesh, fam);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> u(static_cast<size_t>(sp.n_u));
      double cmax = 0.0;
      for (double& v : u) {
        v = coeff(rng);
        cmax = std::max(cmax, std::abs(v));
      }
      const double bound = local_velocity_dofs(fam) * cmax;  // pointwise field bound
      const double scale = 1.0 + bound * bound * bound * area;
      chk.value = std::max(chk.value, std::abs(convection_power(sp, u, u)) / scale);
    }
  }
  chk.pass = chk.value <= chk.threshold;
  return chk;
}

VerifyCheck check_difference_identity() {
  VerifyCheck chk{"difference-identity", false, 0.0, 1e-12, "10 random pairs, Mini mass matrix"};
  std::mt19937 rng(7102);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const Mesh mesh = build_rectangle_mesh(-1.0, -1.0, 1.0, 1.0, 2, 2);
  const MixedSpace sp = build_space(mesh, ElementFamily::Mini);
  const SparseMatrixCSR mass = velocity_mass_matrix(sp);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xk(static_cast<size_t>(sp.n_u)), xkm1(xk.size());
    for (double& v : xk) v = coeff(rng);
    for (double& v : xkm1) v = coeff(rng);
    const double gap = difference_identity_gap(mass, xk, xkm1, 0.37);
    chk.value = std::max(chk.value, std::abs(gap) / (1.0 + norm2(xk)));
  }
  chk.pass = chk.value <= chk.threshold;
  return chk;
}

VerifyCheck check_jacobian_fd(const ExperimentConfig& cfg) {
  VerifyCheck chk{"jacobian-fd", false, 0.0, 1e-6, "central differences, p in {2, 11/5}"};
  std::mt19937 rng(7103);
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  const Mesh mesh = build_rectangle_mesh(-1.0, -1.0, 1.0, 1.0, 2, 2);
  const MixedSpace sp = build_space(mesh, cfg.family);
  const int n = system_size(sp);
  const std::vector<double> u_prev(static_cast<size_t>(sp.n_u), 0.0);
  const double tau = 0.1;

  for (double p : {2.0, 11.0 / 5.0}) {
    const StressModel model{p, 1e-4, {}};
    for (Convection conv : {Convection::off, Convection::on}) {
      for (int trial = 0; trial < 2; ++trial) {
        std::vector<double> x(static_cast<size_t>(n));
        for (double& v : x) v = coeff(rng);
        std::vector<double> dir(static_cast<size_t>(n));
        double dn = 0.0;
        for (double& v : dir) {
          v = coeff(rng);
          dn += v * v;
        }
        dn = std::sqrt(dn);
        for (double& v : dir) v /= dn;

        const DiscreteState sk = unpack_state(sp, x, tau);
        const SparseMatrixCSR jac = assemble_jacobian(sp, model, sk, tau, 1, conv);
        std::vector<double> jd;
        jac.multiply(dir, jd);

        const double eps = 1e-6;
        std::vector<double> xp = x, xm = x;
        for (int i = 0; i < n; ++i) {
          xp[i] += eps * dir[i];
          xm[i] -= eps * dir[i];
        }
        const auto rp = assemble_residual(sp, model, unpack_state(sp, xp, tau), u_prev, tau, 1,
                                          SourceTerm{}, conv, {}, xp[n - 1]);
        const auto rm = assemble_residual(sp, model, unpack_state(sp, xm, tau), u_prev, tau, 1,
                                          SourceTerm{}, conv, {}, xm[n - 1]);
        double diff2 = 0.0, ref2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double fd = (rp[i] - rm[i]) / (2.0 * eps);
          diff2 += (fd - jd[i]) * (fd - jd[i]);
          ref2 += jd[i] * jd[i];
        }
        chk.value = std::max(chk.value, std::sqrt(diff2) / std::max(std::sqrt(ref2), 1e-14));
      }
    }
  }
  chk.pass = chk.value <= chk.threshold;
  return chk;
}

VerifyCheck check_quadrature() {
  VerifyCheck chk{"quadrature-exactness", false, 0.0, 1e-13, "monomials through degree 14"};
  for (int deg = 1; deg <= 14; ++deg) {
    const QuadratureRule rule = triangle_quadrature(deg);
    for (int a = 0; a + 0 <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double q = 0.0;
        for (const QuadraturePoint& qp : rule.points)
          q += qp.w * std::pow(qp.l1, a) * std::pow(qp.l2, b);
        // int_T x^a y^b = a! b! / (a+b+2)!
        double exact = 1.0;
        for (int i = 1; i <= a; ++i) exact *= i;
        for (int i = 1; i <= b; ++i) exact *= i;
        for (int i = 1; i <= a + b + 2; ++i) exact /= i;
        chk.value = std::max(chk.value, std::abs(q - exact) / exact);
      }
  }
  chk.pass = chk.value <= chk.threshold;
  return chk;
}

VerifyCheck check_clement() {
  VerifyCheck chk{"clement-mean", false, 0.0, 1e-13, "polynomial exactness and l^p contraction"};
  const double tau = 0.1;
  // Quadratic: mean over slab k is tau^2 (3k^2 - 3k + 1).
  for (int k : {1, 3, 7}) {
    const double got = interval_mean([](double t) { return 3.0 * t * t; }, tau, k, 3);
    const double exact = tau * tau * (3.0 * k * k - 3.0 * k + 1.0);
    chk.value = std::max(chk.value, std::abs(got - exact) / exact);
    const double lin = interval_mean([](double t) { return t; }, tau, k, 3);
    chk.value = std::max(chk.value, std::abs(lin - (k - 0.5) * tau) / ((k - 0.5) * tau));
  }
  // Jensen: sum tau |mean_k|^p <= int |g|^p for smooth g.
  const double p = 11.0 / 5.0;
  const int K = 10;
  const double tau2 = 1.0 / K;
  auto g = [](double t) { return std::sin(4.0 * t); };
  double lhs = 0.0, rhs = 0.0;
  for (int k = 1; k <= K; ++k) {
    lhs += tau2 * std::pow(std::abs(interval_mean(g, tau2, k, 3)), p);
    for (const IntervalPoint& ip : gauss_legendre(20, (k - 1) * tau2, k * tau2))
      rhs += ip.w * std::pow(std::abs(g(ip.x)), p);
  }
  if (lhs > rhs + 1e-12) chk.value = std::max(chk.value, lhs - rhs);
  chk.pass = chk.value <= chk.threshold;
  return chk;
}

void check_stability(const ExperimentConfig& base, std::vector<VerifyCheck>& out) {
  ExperimentConfig cfg = default_config(ExperimentKind::vortex);
  cfg.family = base.family;
  cfg.nx = 6;
  cfg.ny = 2;
  cfg.K = 10;
  cfg.T = 0.1;
  cfg.newton = base.newton;
  cfg.out_dir = (std::filesystem::temp_directory_path() / "pnsfem_verify_run").string();
  cfg.vtk_stride = 0;
  cfg.checkpoint_stride = 0;

  VerifyCheck bound{"stability-bound", false, 0.0, 0.0, "vortex 10 steps, lhs <= rhs + budget"};
  VerifyCheck mono{"kinetic-monotone", false, 0.0, 1e-12, "f = 0 kinetic energy decay"};
  VerifyCheck ident{"energy-identity", false, 0.0, 1e-10, "per-step identity gap, relative"};
  try {
    const RunResult run = run_experiment(cfg);
    const EnergyLedger led = stability_report(run.traj);
    const double scale = 1.0 + run.traj.initial_kinetic;
    bound.threshold = cfg.K * cfg.newton.abs_tol * scale;
    bound.value = led.max_violation;
    bound.pass = bound.value <= bound.threshold;

    double prev = run.traj.initial_kinetic;
    for (const StepRecord& r : run.traj.records) {
      mono.value = std::max(mono.value, (r.kinetic - prev) / scale);
      ident.value = std::max(ident.value, std::abs(r.identity_gap) / scale);
      prev = r.kinetic;
    }
    mono.pass = mono.value <= mono.threshold;
    ident.pass = ident.value <= ident.threshold;
  } catch (const std::exception& e) {
    bound.detail = e.what();
    mono.detail = e.what();
    ident.detail = e.what();
  }
  out.push_back(bound);
  out.push_back(mono);
  out.push_back(ident);
}

}  // namespace

VerifyReport verify(const ExperimentConfig& cfg) {
  VerifyReport report;
  report.checks.push_back(check_quadrature());
  report.checks.push_back(check_clement());
  report.checks.push_back(check_temam_skew());
  report.checks.push_back(check_difference_identity());
  report.checks.push_back(check_jacobian_fd(cfg));
  check_stability(cfg, report.checks);
  report.all_pass = true;
  for (const VerifyCheck& c : report.checks) report.all_pass = report.all_pass && c.pass;
  return report;
}

void write_verify_report(const VerifyReport& report, std::ostream& out) {
  for (const VerifyCheck& c : report.checks) {
    out << (c.pass ? "PASS" : "FAIL") << " " << c.name << " value=" << c.value
        << " threshold=" << c.threshold;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  out << (report.all_pass ? "verify: all checks passed" : "verify: FAILURES present") << "\n";
}

}  // namespace pnsfem
