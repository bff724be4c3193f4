#include "pnsfem/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pnsfem/quadrature.hpp"

namespace pnsfem {

namespace {

struct Tri {
  Point2 a, b, c;
};

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double point_triangle_distance(Point2 p, const Tri& t) {
  // Inside test via signed areas (counterclockwise triangle).
  auto cross = [](Point2 u, Point2 v) { return u.x * v.y - u.y * v.x; };
  const double s1 = cross(t.b - t.a, p - t.a);
  const double s2 = cross(t.c - t.b, p - t.b);
  const double s3 = cross(t.a - t.c, p - t.c);
  if (s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) return 0.0;
  return std::min({point_segment_distance(p, t.a, t.b), point_segment_distance(p, t.b, t.c),
                   point_segment_distance(p, t.c, t.a)});
}

void append_rule(const Tri& t, const QuadratureRule& rule, const CellGeometry& parent,
                 std::vector<ErrorQuadrature::PlanPoint>& out) {
  const Point2 e1 = t.b - t.a;
  const Point2 e2 = t.c - t.a;
  const double det = e1.x * e2.y - e1.y * e2.x;  // 2*area, sign-free cells only
  for (const QuadraturePoint& qp : rule.points) {
    ErrorQuadrature::PlanPoint pp;
    pp.x = t.a + qp.l1 * e1 + qp.l2 * e2;
    pp.w = qp.w * det;
    const Point2 ref = map_to_reference(parent, pp.x);
    pp.l1 = ref.x;
    pp.l2 = ref.y;
    out.push_back(pp);
  }
}

std::array<Tri, 4> split4(const Tri& t) {
  const Point2 mab = 0.5 * (t.a + t.b);
  const Point2 mbc = 0.5 * (t.b + t.c);
  const Point2 mca = 0.5 * (t.c + t.a);
  return {Tri{t.a, mab, mca}, Tri{mab, t.b, mbc}, Tri{mca, mbc, t.c}, Tri{mab, mbc, mca}};
}

void split_uniform(const Tri& t, int levels, const QuadratureRule& rule,
                   const CellGeometry& parent, std::vector<ErrorQuadrature::PlanPoint>& out) {
  if (levels == 0) {
    append_rule(t, rule, parent, out);
    return;
  }
  for (const Tri& child : split4(t)) split_uniform(child, levels - 1, rule, parent, out);
}

// Rotate the vertex closest to p into slot a.
Tri rotate_to_corner(const Tri& t, Point2 p) {
  const double da = norm(t.a - p), db = norm(t.b - p), dc = norm(t.c - p);
  if (da <= db && da <= dc) return t;
  if (db <= dc) return {t.b, t.c, t.a};
  return {t.c, t.a, t.b};
}

// Dyadic grading toward the corner vertex a: split 1:4, recurse on the
// corner child, base rule on the rest.
void split_graded(const Tri& t, int levels, const QuadratureRule& rule, const CellGeometry& parent,
                  std::vector<ErrorQuadrature::PlanPoint>& out) {
  Tri cur = t;
  for (int l = 0; l < levels; ++l) {
    const auto children = split4(cur);
    for (int i = 1; i < 4; ++i) append_rule(children[i], rule, parent, out);
    cur = children[0];
  }
  append_rule(cur, rule, parent, out);
}

// Precomputed basis data at the plan points of every cell.
struct PlanCache {
  struct Pt {
    double w;
    Point2 x;
    double val[7];
    double grad[7][2];
  };
  std::vector<std::vector<Pt>> cells;
};

PlanCache make_plan_cache(const MixedSpace& space, const ErrorQuadrature& quad) {
  const Mesh& mesh = *space.mesh;
  if (quad.cells.size() != mesh.cells.size())
    throw std::invalid_argument("error quadrature was built for a different mesh");
  const int nloc = local_velocity_dofs(space.family);
  PlanCache cache;
  cache.cells.resize(quad.cells.size());
  for (size_t c = 0; c < quad.cells.size(); ++c) {
    const CellGeometry g = cell_geometry(mesh, static_cast<int>(c));
    cache.cells[c].reserve(quad.cells[c].size());
    for (const auto& pp : quad.cells[c]) {
      PlanCache::Pt pt;
      pt.w = pp.w;
      pt.x = pp.x;
      const BasisEval b = eval_basis_ref(space.family, pp.l1, pp.l2);
      for (int a = 0; a < nloc; ++a) {
        pt.val[a] = b.u_val[a];
        pt.grad[a][0] = g.inv_t[0][0] * b.u_grad[a][0] + g.inv_t[0][1] * b.u_grad[a][1];
        pt.grad[a][1] = g.inv_t[1][0] * b.u_grad[a][0] + g.inv_t[1][1] * b.u_grad[a][1];
      }
      cache.cells[c].push_back(pt);
    }
  }
  return cache;
}

double l2_error_cached(const MixedSpace& space, const PlanCache& cache,
                       const std::vector<double>& u, const ExactSolution& exact, double t) {
  const int nloc = local_velocity_dofs(space.family);
  double acc = 0.0;
  for (size_t c = 0; c < cache.cells.size(); ++c) {
    const auto& ud = space.cell_udofs[c];
    for (const auto& pt : cache.cells[c]) {
      Vec2 uh{};
      for (int a = 0; a < nloc; ++a) {
        uh.x += u[2 * ud[a]] * pt.val[a];
        uh.y += u[2 * ud[a] + 1] * pt.val[a];
      }
      const Vec2 ue = exact.velocity(t, pt.x);
      const double dx = ue.x - uh.x, dy = ue.y - uh.y;
      acc += pt.w * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(acc);
}

double natural_error_cached(const MixedSpace& space, const PlanCache& cache,
                            const StressModel& model, const std::vector<double>& u,
                            const ExactSolution& exact, double t) {
  const int nloc = local_velocity_dofs(space.family);
  double acc = 0.0;
  for (size_t c = 0; c < cache.cells.size(); ++c) {
    const auto& ud = space.cell_udofs[c];
    for (const auto& pt : cache.cells[c]) {
      Mat2 gh{};
      for (int a = 0; a < nloc; ++a) {
        gh.a11 += u[2 * ud[a]] * pt.grad[a][0];
        gh.a12 += u[2 * ud[a]] * pt.grad[a][1];
        gh.a21 += u[2 * ud[a] + 1] * pt.grad[a][0];
        gh.a22 += u[2 * ud[a] + 1] * pt.grad[a][1];
      }
      const SymTensor2 fh = natural_map_F(model, sym(gh));
      const SymTensor2 fe = natural_map_F(model, sym(exact.velocity_gradient(t, pt.x)));
      acc += pt.w * ddot(fe - fh, fe - fh);
    }
  }
  return std::sqrt(acc);
}

}  // namespace

size_t ErrorQuadrature::total_points() const {
  size_t n = 0;
  for (const auto& c : cells) n += c.size();
  return n;
}

ErrorQuadrature build_error_quadrature(const Mesh& mesh, const ErrorQuadratureOptions& opts) {
  const QuadratureRule rule = triangle_quadrature(opts.base_degree);
  ErrorQuadrature quad;
  quad.cells.resize(mesh.cells.size());
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const Tri t{mesh.vertices[mesh.cells[c][0]], mesh.vertices[mesh.cells[c][1]],
                mesh.vertices[mesh.cells[c][2]]};
    auto& out = quad.cells[c];
    if (!opts.singular) {
      append_rule(t, rule, g, out);
      continue;
    }
    const double dist = point_triangle_distance(opts.singular_point, t);
    if (dist >= opts.radius_one_split) {
      append_rule(t, rule, g, out);
    } else if (dist >= opts.radius_two_splits) {
      split_uniform(t, 1, rule, g, out);
    } else if (dist > 0.0) {
      split_uniform(t, 2, rule, g, out);
    } else {
      split_graded(rotate_to_corner(t, opts.singular_point), opts.graded_levels, rule, g, out);
    }
  }
  return quad;
}

double velocity_l2_error(const MixedSpace& space, const ErrorQuadrature& quad,
                         const std::vector<double>& u, const ExactSolution& exact, double t) {
  return l2_error_cached(space, make_plan_cache(space, quad), u, exact, t);
}

double natural_distance_error(const MixedSpace& space, const ErrorQuadrature& quad,
                              const StressModel& model, const std::vector<double>& u,
                              const ExactSolution& exact, double t) {
  return natural_error_cached(space, make_plan_cache(space, quad), model, u, exact, t);
}

double error_l2_max(const MixedSpace& space, const ErrorQuadrature& quad, const Trajectory& traj,
                    const ExactSolution& exact) {
  if (!traj.completed) throw std::invalid_argument("error_l2_max: incomplete trajectory");
  const PlanCache cache = make_plan_cache(space, quad);
  double e = 0.0;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const double t = traj.grid.time(static_cast<int>(k));
    e = std::max(e, l2_error_cached(space, cache, traj.states[k].u, exact, t));
  }
  return e;
}

double error_natural(const MixedSpace& space, const ErrorQuadrature& quad,
                     const StressModel& model, const Trajectory& traj,
                     const ExactSolution& exact, EFVariant variant) {
  if (!traj.completed) throw std::invalid_argument("error_natural: incomplete trajectory");
  const PlanCache cache = make_plan_cache(space, quad);
  const double tau = traj.grid.tau();
  double acc = 0.0;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const double t = traj.grid.time(static_cast<int>(k));
    const double d = natural_error_cached(space, cache, model, traj.states[k].u, exact, t);
    acc += variant == EFVariant::squared ? tau * d * d : tau * d;
  }
  return std::sqrt(acc);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw std::invalid_argument("eoc: need equally sized lists of length >= 2");
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
    if (!(hs[i] > 0.0) || (i > 0 && !(hs[i] < hs[i - 1])))
      throw std::invalid_argument("eoc: hs must be positive and strictly decreasing");
  }
  std::vector<double> rates;
  for (size_t i = 1; i < errors.size(); ++i)
    rates.push_back(std::log(errors[i] / errors[i - 1]) / std::log(hs[i] / hs[i - 1]));
  return rates;
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return std::string(buf);
  };
  auto rate = [](double v) {
    if (!std::isfinite(v)) return std::string();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  out << "# family=" << report.family << " p=" << report.p << " delta=" << report.delta
      << " tau=" << report.tau << " K=" << report.K << " variant=" << report.variant << "\n";
  out << "n,h,e_L2,EOC_L2,e_F,EOC_F,EOC_tot\n";
  for (const ConvergenceRow& r : report.rows)
    out << r.n << "," << num(r.h) << "," << num(r.e_l2) << "," << rate(r.eoc_l2) << ","
        << num(r.e_f) << "," << rate(r.eoc_f) << "," << rate(r.eoc_tot) << "\n";
}

}  // namespace pnsfem
