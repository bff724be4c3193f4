#include "pnsfem/forms.hpp"

#include <cmath>
#include <stdexcept>

#include "pnsfem/quadrature.hpp"

namespace pnsfem {

namespace {

// Reference basis evaluated once per rule point; cells only change the
// affine map.
struct RuleCache {
  QuadratureRule rule;
  std::vector<BasisEval> basis;
};

RuleCache make_rule_cache(ElementFamily family, int degree) {
  RuleCache rc;
  rc.rule = triangle_quadrature(degree);
  rc.basis.reserve(rc.rule.points.size());
  for (const QuadraturePoint& qp : rc.rule.points)
    rc.basis.push_back(eval_basis_ref(family, qp.l1, qp.l2));
  return rc;
}

void physical_gradients(const CellGeometry& g, const BasisEval& b, int nloc, double ga[7][2]) {
  for (int a = 0; a < nloc; ++a) {
    ga[a][0] = g.inv_t[0][0] * b.u_grad[a][0] + g.inv_t[0][1] * b.u_grad[a][1];
    ga[a][1] = g.inv_t[1][0] * b.u_grad[a][0] + g.inv_t[1][1] * b.u_grad[a][1];
  }
}

void assemble_core(const MixedSpace& sp, const StressModel& model, const std::vector<double>& x,
                   const std::vector<double>& u_prev, double tau, int k, const SourceTerm& rhs,
                   Convection conv, const AssemblyOptions& opts, std::vector<double>* res,
                   TripletBuffer* jac) {
  const Mesh& mesh = *sp.mesh;
  const int N = system_size(sp);
  if (static_cast<int>(x.size()) != N) throw std::invalid_argument("assemble: state size mismatch");
  if (static_cast<int>(u_prev.size()) != sp.n_u)
    throw std::invalid_argument("assemble: u_prev size mismatch");
  if (!(tau > 0.0)) throw std::invalid_argument("assemble: tau must be positive");
  const double gauge = x[N - 1];

  const RuleCache rc = make_rule_cache(sp.family, effective_quad_degree(opts, sp.family));
  const auto tpts = gauss_legendre(opts.time_quad, (k - 1) * tau, k * tau);
  const StressModel plain{model.p, model.delta, {}};  // nu folded in via its slab mean
  const bool has_f = static_cast<bool>(rhs.force);
  const bool has_sp = static_cast<bool>(rhs.stress_part);
  const bool convect = conv == Convection::on;

  if (res) res->assign(static_cast<size_t>(N), 0.0);

  const int nloc = local_velocity_dofs(sp.family);
  const int nq = static_cast<int>(rc.rule.points.size());

  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const auto& ud = sp.cell_udofs[c];
    const auto& pd = sp.cell_pdofs[c];

    double ul[7][2], dl[7][2], pl[3];
    for (int a = 0; a < nloc; ++a)
      for (int d = 0; d < 2; ++d) {
        ul[a][d] = x[2 * ud[a] + d];
        dl[a][d] = (ul[a][d] - u_prev[2 * ud[a] + d]) / tau;
      }
    for (int j = 0; j < 3; ++j) pl[j] = x[sp.n_u + pd[j]];

    for (int q = 0; q < nq; ++q) {
      const QuadraturePoint& qp = rc.rule.points[q];
      const BasisEval& b = rc.basis[q];
      const double w = qp.w * g.det;
      const Point2 xq = map_to_cell(g, qp.l1, qp.l2);

      double ga[7][2];
      physical_gradients(g, b, nloc, ga);

      Vec2 u{}, dtu{};
      Mat2 grad{};
      for (int a = 0; a < nloc; ++a) {
        u.x += ul[a][0] * b.u_val[a];
        u.y += ul[a][1] * b.u_val[a];
        dtu.x += dl[a][0] * b.u_val[a];
        dtu.y += dl[a][1] * b.u_val[a];
        grad.a11 += ul[a][0] * ga[a][0];
        grad.a12 += ul[a][0] * ga[a][1];
        grad.a21 += ul[a][1] * ga[a][0];
        grad.a22 += ul[a][1] * ga[a][1];
      }
      const SymTensor2 du = sym(grad);
      const double divu = grad.a11 + grad.a22;
      double prq = 0.0;
      for (int j = 0; j < 3; ++j) prq += pl[j] * b.p_val[j];

      double nubar = 1.0;
      if (model.nu) {
        double s = 0.0;
        for (const IntervalPoint& tp : tpts) s += tp.w * model.nu(tp.x, xq);
        nubar = s / tau;
      }

      SymTensor2 sym_b[7][2];
      for (int a = 0; a < nloc; ++a) {
        sym_b[a][0] = {ga[a][0], 0.5 * ga[a][1], 0.0};
        sym_b[a][1] = {0.0, 0.5 * ga[a][0], ga[a][1]};
      }

      if (res) {
        const SymTensor2 sbar = nubar * stress(plain, 0.0, xq, du);
        Vec2 fbar{};
        SymTensor2 spbar{};
        if (has_f) {
          for (const IntervalPoint& tp : tpts) fbar = fbar + tp.w * rhs.force(tp.x, xq);
          fbar = (1.0 / tau) * fbar;
        }
        if (has_sp) {
          for (const IntervalPoint& tp : tpts) spbar = spbar + tp.w * rhs.stress_part(tp.x, xq);
          spbar = (1.0 / tau) * spbar;
        }
        const Vec2 du_u = apply(du, u);
        for (int a = 0; a < nloc; ++a) {
          const double na = b.u_val[a];
          const Vec2 gv{ga[a][0], ga[a][1]};
          const Vec2 sg = apply(sbar, gv);
          const Vec2 spg = has_sp ? apply(spbar, gv) : Vec2{};
          const double ug = dot(u, gv);
          const double comp[2] = {
              dtu.x * na + sg.x - prq * gv.x - (has_f ? fbar.x * na : 0.0) - spg.x +
                  (convect ? 0.5 * na * du_u.x - 0.5 * u.x * ug : 0.0),
              dtu.y * na + sg.y - prq * gv.y - (has_f ? fbar.y * na : 0.0) - spg.y +
                  (convect ? 0.5 * na * du_u.y - 0.5 * u.y * ug : 0.0)};
          (*res)[2 * ud[a]] += w * comp[0];
          (*res)[2 * ud[a] + 1] += w * comp[1];
        }
        for (int j = 0; j < 3; ++j) (*res)[sp.n_u + pd[j]] += w * (-divu - gauge) * b.p_val[j];
        (*res)[N - 1] += w * (-prq);
      }

      if (jac) {
        StressTangent tan = stress_derivative(plain, 0.0, xq, du);
        tan.c_id *= nubar;
        tan.c_dir *= nubar;

        for (int a = 0; a < nloc; ++a) {
          const double na = b.u_val[a];
          const double uga = u.x * ga[a][0] + u.y * ga[a][1];
          for (int ca = 0; ca < 2; ++ca) {
            const int row = 2 * ud[a] + ca;
            const double uca = (ca == 0) ? u.x : u.y;
            for (int bb = 0; bb < nloc; ++bb) {
              const double nb = b.u_val[bb];
              for (int d = 0; d < 2; ++d) {
                double val = tan.pair(sym_b[a][ca], sym_b[bb][d]);
                if (ca == d) val += na * nb / tau;
                if (convect) {
                  const Vec2 sbu = apply(sym_b[bb][d], u);
                  const double dcd = (ca == 0) ? (d == 0 ? du.a11 : du.a12)
                                               : (d == 0 ? du.a12 : du.a22);
                  val += 0.5 * na * ((ca == 0 ? sbu.x : sbu.y) + nb * dcd);
                  val -= 0.5 * ((ca == d ? nb * uga : 0.0) + uca * nb * ga[a][d]);
                }
                jac->add(row, 2 * ud[bb] + d, w * val);
              }
            }
            for (int j = 0; j < 3; ++j) {
              const double v = -w * b.p_val[j] * ga[a][ca];
              jac->add(row, sp.n_u + pd[j], v);
              jac->add(sp.n_u + pd[j], row, v);
            }
          }
        }
        for (int j = 0; j < 3; ++j) {
          const double v = -w * b.p_val[j];
          jac->add(sp.n_u + pd[j], N - 1, v);
          jac->add(N - 1, sp.n_u + pd[j], v);
        }
      }
    }
  }
  // The gauge unknown never couples to itself; keep the diagonal in the
  // pattern so row replacement and factorization see a stored entry.
  if (jac) jac->add(N - 1, N - 1, 0.0);
}

}  // namespace

int effective_quad_degree(const AssemblyOptions& opts, ElementFamily family) {
  return opts.quad_degree > 0 ? opts.quad_degree : 2 * velocity_poly_degree(family) + 4;
}

int system_size(const MixedSpace& space) { return space.n_u + space.n_p + 1; }

std::vector<double> pack_state(const MixedSpace& space, const DiscreteState& state, double gauge) {
  std::vector<double> x(static_cast<size_t>(system_size(space)), 0.0);
  if (static_cast<int>(state.u.size()) != space.n_u ||
      static_cast<int>(state.pr.size()) != space.n_p)
    throw std::invalid_argument("pack_state: coefficient sizes do not match the space");
  std::copy(state.u.begin(), state.u.end(), x.begin());
  std::copy(state.pr.begin(), state.pr.end(), x.begin() + space.n_u);
  x.back() = gauge;
  return x;
}

DiscreteState unpack_state(const MixedSpace& space, const std::vector<double>& x, double t) {
  if (static_cast<int>(x.size()) != system_size(space))
    throw std::invalid_argument("unpack_state: vector size mismatch");
  DiscreteState s;
  s.u.assign(x.begin(), x.begin() + space.n_u);
  s.pr.assign(x.begin() + space.n_u, x.begin() + space.n_u + space.n_p);
  s.t = t;
  return s;
}

double interval_mean(const std::function<double(double)>& g, double tau, int k, int n_gauss) {
  if (!(tau > 0.0)) throw std::invalid_argument("interval_mean: tau must be positive");
  double s = 0.0;
  for (const IntervalPoint& tp : gauss_legendre(n_gauss, (k - 1) * tau, k * tau)) s += tp.w * g(tp.x);
  return s / tau;
}

std::vector<double> assemble_residual(const MixedSpace& space, const StressModel& model,
                                      const DiscreteState& state,
                                      const std::vector<double>& u_prev, double tau, int k,
                                      const SourceTerm& rhs, Convection conv,
                                      const AssemblyOptions& opts, double gauge) {
  std::vector<double> res;
  assemble_core(space, model, pack_state(space, state, gauge), u_prev, tau, k, rhs, conv, opts,
                &res, nullptr);
  return res;
}

SparseMatrixCSR assemble_jacobian(const MixedSpace& space, const StressModel& model,
                                  const DiscreteState& state, double tau, int k, Convection conv,
                                  const AssemblyOptions& opts) {
  TripletBuffer buf(system_size(space), system_size(space));
  const std::vector<double> zeros(static_cast<size_t>(space.n_u), 0.0);
  assemble_core(space, model, pack_state(space, state, 0.0), zeros, tau, k, SourceTerm{}, conv,
                opts, nullptr, &buf);
  return buf.compress();
}

void apply_dirichlet(SparseSystem& sys, const MixedSpace& space, const BoundaryTrace& trace,
                     double t) {
  constrain_jacobian_rows(sys.matrix, space);
  for (int g : space.boundary_scalar) {
    const Vec2 val = trace ? trace(t, space.u_nodes[g]) : Vec2{};
    sys.rhs[2 * g] = val.x;
    sys.rhs[2 * g + 1] = val.y;
  }
}

void constrain_jacobian_rows(SparseMatrixCSR& m, const MixedSpace& space) {
  for (int g : space.boundary_scalar) {
    for (int comp = 0; comp < 2; ++comp) {
      const int row = 2 * g + comp;
      bool diag_seen = false;
      for (int kk = m.row_offsets[row]; kk < m.row_offsets[row + 1]; ++kk) {
        m.values[kk] = (m.col_indices[kk] == row) ? 1.0 : 0.0;
        diag_seen |= m.col_indices[kk] == row;
      }
      if (!diag_seen) throw std::runtime_error("constrain_jacobian_rows: diagonal not in pattern");
    }
  }
}

void constrain_residual(std::vector<double>& r, const MixedSpace& space,
                        const std::vector<double>& u, const BoundaryTrace& trace, double t) {
  for (int g : space.boundary_scalar) {
    const Vec2 val = trace ? trace(t, space.u_nodes[g]) : Vec2{};
    r[2 * g] = u[2 * g] - val.x;
    r[2 * g + 1] = u[2 * g + 1] - val.y;
  }
}

SparseMatrixCSR velocity_mass_matrix(const MixedSpace& space, const AssemblyOptions& opts) {
  const RuleCache rc = make_rule_cache(space.family, effective_quad_degree(opts, space.family));
  const int nloc = local_velocity_dofs(space.family);
  TripletBuffer buf(space.n_u, space.n_u);
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeometry g = cell_geometry(*space.mesh, c);
    const auto& ud = space.cell_udofs[c];
    for (size_t q = 0; q < rc.rule.points.size(); ++q) {
      const double w = rc.rule.points[q].w * g.det;
      const BasisEval& b = rc.basis[q];
      for (int a = 0; a < nloc; ++a)
        for (int bb = 0; bb < nloc; ++bb) {
          const double v = w * b.u_val[a] * b.u_val[bb];
          buf.add(2 * ud[a], 2 * ud[bb], v);
          buf.add(2 * ud[a] + 1, 2 * ud[bb] + 1, v);
        }
    }
  }
  return buf.compress();
}

std::vector<double> pressure_moments(const MixedSpace& space, const AssemblyOptions& opts) {
  const RuleCache rc = make_rule_cache(space.family, effective_quad_degree(opts, space.family));
  std::vector<double> m(static_cast<size_t>(space.n_p), 0.0);
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeometry g = cell_geometry(*space.mesh, c);
    const auto& pd = space.cell_pdofs[c];
    for (size_t q = 0; q < rc.rule.points.size(); ++q) {
      const double w = rc.rule.points[q].w * g.det;
      for (int j = 0; j < 3; ++j) m[pd[j]] += w * rc.basis[q].p_val[j];
    }
  }
  return m;
}

double stress_power(const MixedSpace& space, const StressModel& model,
                    const std::vector<double>& u, double tau, int k,
                    const AssemblyOptions& opts) {
  const RuleCache rc = make_rule_cache(space.family, effective_quad_degree(opts, space.family));
  const auto tpts = gauss_legendre(opts.time_quad, (k - 1) * tau, k * tau);
  const StressModel plain{model.p, model.delta, {}};
  const int nloc = local_velocity_dofs(space.family);
  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeometry g = cell_geometry(*space.mesh, c);
    const auto& ud = space.cell_udofs[c];
    for (size_t q = 0; q < rc.rule.points.size(); ++q) {
      const BasisEval& b = rc.basis[q];
      double ga[7][2];
      physical_gradients(g, b, nloc, ga);
      Mat2 grad{};
      for (int a = 0; a < nloc; ++a) {
        grad.a11 += u[2 * ud[a]] * ga[a][0];
        grad.a12 += u[2 * ud[a]] * ga[a][1];
        grad.a21 += u[2 * ud[a] + 1] * ga[a][0];
        grad.a22 += u[2 * ud[a] + 1] * ga[a][1];
      }
      const SymTensor2 du = sym(grad);
      const Point2 xq = map_to_cell(g, rc.rule.points[q].l1, rc.rule.points[q].l2);
      double nubar = 1.0;
      if (model.nu) {
        double s = 0.0;
        for (const IntervalPoint& tp : tpts) s += tp.w * model.nu(tp.x, xq);
        nubar = s / tau;
      }
      acc += rc.rule.points[q].w * g.det * nubar * ddot(stress(plain, 0.0, xq, du), du);
    }
  }
  return acc;
}

double rhs_power(const MixedSpace& space, const SourceTerm& rhs, const std::vector<double>& u,
                 double tau, int k, const AssemblyOptions& opts) {
  const RuleCache rc = make_rule_cache(space.family, effective_quad_degree(opts, space.family));
  const auto tpts = gauss_legendre(opts.time_quad, (k - 1) * tau, k * tau);
  const int nloc = local_velocity_dofs(space.family);
  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeometry g = cell_geometry(*space.mesh, c);
    const auto& ud = space.cell_udofs[c];
    for (size_t q = 0; q < rc.rule.points.size(); ++q) {
      const BasisEval& b = rc.basis[q];
      const Point2 xq = map_to_cell(g, rc.rule.points[q].l1, rc.rule.points[q].l2);
      const double w = rc.rule.points[q].w * g.det;
      double ga[7][2];
      physical_gradients(g, b, nloc, ga);
      Vec2 uv{};
      Mat2 grad{};
      for (int a = 0; a < nloc; ++a) {
        uv.x += u[2 * ud[a]] * b.u_val[a];
        uv.y += u[2 * ud[a] + 1] * b.u_val[a];
        grad.a11 += u[2 * ud[a]] * ga[a][0];
        grad.a12 += u[2 * ud[a]] * ga[a][1];
        grad.a21 += u[2 * ud[a] + 1] * ga[a][0];
        grad.a22 += u[2 * ud[a] + 1] * ga[a][1];
      }
      if (rhs.force) {
        Vec2 fbar{};
        for (const IntervalPoint& tp : tpts) fbar = fbar + tp.w * rhs.force(tp.x, xq);
        acc += w * dot((1.0 / tau) * fbar, uv);
      }
      if (rhs.stress_part) {
        SymTensor2 spbar{};
        for (const IntervalPoint& tp : tpts) spbar = spbar + tp.w * rhs.stress_part(tp.x, xq);
        acc += w * ddot((1.0 / tau) * spbar, sym(grad));
      }
    }
  }
  return acc;
}

double convection_power(const MixedSpace& space, const std::vector<double>& u,
                        const std::vector<double>& v, const AssemblyOptions& opts) {
  const RuleCache rc = make_rule_cache(space.family, effective_quad_degree(opts, space.family));
  const int nloc = local_velocity_dofs(space.family);
  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeometry g = cell_geometry(*space.mesh, c);
    const auto& ud = space.cell_udofs[c];
    for (size_t q = 0; q < rc.rule.points.size(); ++q) {
      const BasisEval& b = rc.basis[q];
      double ga[7][2];
      physical_gradients(g, b, nloc, ga);
      Vec2 uv{}, vv{};
      Mat2 gu{}, gv{};
      for (int a = 0; a < nloc; ++a) {
        uv.x += u[2 * ud[a]] * b.u_val[a];
        uv.y += u[2 * ud[a] + 1] * b.u_val[a];
        vv.x += v[2 * ud[a]] * b.u_val[a];
        vv.y += v[2 * ud[a] + 1] * b.u_val[a];
        gu.a11 += u[2 * ud[a]] * ga[a][0];
        gu.a12 += u[2 * ud[a]] * ga[a][1];
        gu.a21 += u[2 * ud[a] + 1] * ga[a][0];
        gu.a22 += u[2 * ud[a] + 1] * ga[a][1];
        gv.a11 += v[2 * ud[a]] * ga[a][0];
        gv.a12 += v[2 * ud[a]] * ga[a][1];
        gv.a21 += v[2 * ud[a] + 1] * ga[a][0];
        gv.a22 += v[2 * ud[a] + 1] * ga[a][1];
      }
      acc += rc.rule.points[q].w * g.det * temam_kernel(uv, sym(gu), vv, sym(gv));
    }
  }
  return acc;
}

double divergence_l2(const MixedSpace& space, const std::vector<double>& u,
                     const AssemblyOptions& opts) {
  const RuleCache rc = make_rule_cache(space.family, effective_quad_degree(opts, space.family));
  const int nloc = local_velocity_dofs(space.family);
  double acc = 0.0;
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeometry g = cell_geometry(*space.mesh, c);
    const auto& ud = space.cell_udofs[c];
    for (size_t q = 0; q < rc.rule.points.size(); ++q) {
      double ga[7][2];
      physical_gradients(g, rc.basis[q], nloc, ga);
      double div = 0.0;
      for (int a = 0; a < nloc; ++a)
        div += u[2 * ud[a]] * ga[a][0] + u[2 * ud[a] + 1] * ga[a][1];
      acc += rc.rule.points[q].w * g.det * div * div;
    }
  }
  return std::sqrt(acc);
}

DiscreteState project_initial_state(const MixedSpace& space, const std::function<Vec2(Point2)>& u0,
                                    const AssemblyOptions& opts) {
  // The projection solves a mass saddle system: the step machinery with zero
  // viscosity, tau = 1, zero previous state and f = u0 reduces to exactly
  // that, so reuse it.
  const StressModel mass_only{2.0, 0.0, [](double, Point2) { return 0.0; }};
  const SourceTerm rhs{[&u0](double, Point2 x) { return u0(x); }, {}};
  const BoundaryTrace trace = [&u0](double, Point2 x) { return u0(x); };
  const std::vector<double> zeros(static_cast<size_t>(space.n_u), 0.0);

  DiscreteState origin;
  origin.u = zeros;
  origin.pr.assign(static_cast<size_t>(space.n_p), 0.0);
  std::vector<double> r =
      assemble_residual(space, mass_only, origin, zeros, 1.0, 1, rhs, Convection::off, opts, 0.0);
  constrain_residual(r, space, origin.u, trace, 0.0);
  for (double& v : r) v = -v;

  SparseMatrixCSR j = assemble_jacobian(space, mass_only, origin, 1.0, 1, Convection::off, opts);
  constrain_jacobian_rows(j, space);
  return unpack_state(space, sparse_factor_solve(j, r), 0.0);
}

DiscreteState interpolate_initial_state(const MixedSpace& space,
                                        const std::function<Vec2(Point2)>& u0) {
  DiscreteState s;
  s.u = interpolate_velocity(space, u0);
  s.pr.assign(static_cast<size_t>(space.n_p), 0.0);
  s.t = 0.0;
  return s;
}

}  // namespace pnsfem
