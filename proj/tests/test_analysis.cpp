#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "pnsfem/analysis.hpp"
#include "pnsfem/elements.hpp"
#include "pnsfem/mesh.hpp"

using namespace pnsfem;

namespace {

Mesh square_mesh() { return build_rectangle_mesh(-1.0, -1.0, 1.0, 1.0, 2, 2); }

Trajectory zero_trajectory(const MixedSpace& sp, double T, int K) {
  Trajectory traj;
  traj.grid = TimeGrid{T, K};
  for (int k = 0; k <= K; ++k) {
    DiscreteState s;
    s.t = traj.grid.time(k);
    s.u.assign(static_cast<size_t>(sp.n_u), 0.0);
    s.pr.assign(static_cast<size_t>(sp.n_p), 0.0);
    traj.states.push_back(s);
  }
  traj.completed = true;
  return traj;
}

ExactSolution shear_exact() {
  ExactSolution ex;
  ex.velocity = [](double, Point2 x) -> Vec2 { return {x.y, 0.0}; };
  ex.velocity_gradient = [](double, Point2) -> Mat2 {
    Mat2 g{};
    g.a12 = 1.0;
    return g;
  };
  return ex;
}

}  // namespace

TEST_CASE("eoc of exactly halving errors is exactly one") {
  const auto rates = eoc({4.0, 2.0, 1.0}, {1.0, 0.5, 0.25});
  REQUIRE(rates.size() == 2);
  CHECK(rates[0] == 1.0);
  CHECK(rates[1] == 1.0);
}

TEST_CASE("eoc reproduces a hand computed rate") {
  const double h1 = std::sqrt(2.0);
  const auto rates = eoc({4.698e-1, 2.451e-1}, {h1, h1 / 2.0});
  REQUIRE(rates.size() == 1);
  CHECK(rates[0] == doctest::Approx(0.938676229145).epsilon(1e-9));
  CHECK(std::abs(rates[0] - 0.939) < 5e-3);
}

TEST_CASE("eoc input validation") {
  CHECK_THROWS_AS(eoc({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(eoc({1.0, 0.0}, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("plain error quadrature integrates high order polynomials") {
  const Mesh m = square_mesh();
  const ErrorQuadrature quad = build_error_quadrature(m);
  double area = 0.0;
  for (const auto& cell : quad.cells)
    for (const auto& pt : cell) area += pt.w;
  CHECK(area == doctest::Approx(4.0).epsilon(1e-13));

  const MixedSpace sp = build_space(m, ElementFamily::Mini);
  ExactSolution ex;
  ex.velocity = [](double, Point2 x) -> Vec2 { return {x.x * x.y, 0.0}; };
  const std::vector<double> zero(static_cast<size_t>(sp.n_u), 0.0);
  // || x y ||_L2 over (-1,1)^2 is sqrt(4/9)
  CHECK(velocity_l2_error(sp, quad, zero, ex, 0.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("graded quadrature integrates the singular error density") {
  const Mesh m = square_mesh();
  ErrorQuadratureOptions opts;
  opts.singular = true;
  const ErrorQuadrature quad = build_error_quadrature(m, opts);

  double area = 0.0;
  double radial = 0.0;
  const double alpha = 16.0 / 55.0;
  for (const auto& cell : quad.cells)
    for (const auto& pt : cell) {
      area += pt.w;
      const double r = std::hypot(pt.x.x, pt.x.y);
      radial += pt.w * std::pow(r, 2.0 * alpha - 2.0);
    }
  CHECK(area == doctest::Approx(4.0).epsilon(1e-12));
  // integral of |x|^(2 alpha - 2) over (-1,1)^2, reference value from
  // adaptive high precision quadrature
  CHECK(radial == doctest::Approx(11.533486074716278).epsilon(5e-3));
}

TEST_CASE("spatial errors against a zero discrete field") {
  const Mesh m = square_mesh();
  const MixedSpace sp = build_space(m, ElementFamily::Mini);
  const ErrorQuadrature quad = build_error_quadrature(m);
  const ExactSolution ex = shear_exact();
  const Trajectory traj = zero_trajectory(sp, 1.0, 2);

  // || y ||_L2 = sqrt(4/3), constant in time
  CHECK(error_l2_max(sp, quad, traj, ex) ==
        doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));

  // p = 2, delta = 0: F(A) = A, ||F(Du)||^2 = 2 * (1/2)^2 * 4 = 2
  const StressModel model{2.0, 0.0, {}};
  const double tau = traj.grid.tau();
  const double sq = error_natural(sp, quad, model, traj, ex, EFVariant::squared);
  CHECK(sq == doctest::Approx(std::sqrt(3.0 * tau * 2.0)).epsilon(1e-12));
  const double aw = error_natural(sp, quad, model, traj, ex, EFVariant::as_written);
  CHECK(aw == doctest::Approx(std::sqrt(3.0 * tau * std::sqrt(2.0))).epsilon(1e-12));

  // single time natural distance
  CHECK(natural_distance_error(sp, quad, model, traj.states[0].u, ex, 0.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("errors vanish when the discrete field reproduces the exact one") {
  const Mesh m = square_mesh();
  const ExactSolution ex = shear_exact();
  for (ElementFamily fam :
       {ElementFamily::Mini, ElementFamily::TaylorHood, ElementFamily::CrouzeixRaviart}) {
    const MixedSpace sp = build_space(m, fam);
    const ErrorQuadrature quad = build_error_quadrature(m);
    Trajectory traj = zero_trajectory(sp, 1.0, 2);
    for (auto& s : traj.states)
      s.u = interpolate_velocity(sp, [&](Point2 x) { return ex.velocity(s.t, x); });
    CHECK(error_l2_max(sp, quad, traj, ex) <= 1e-13);
    const StressModel model{11.0 / 5.0, 1e-4, {}};
    CHECK(error_natural(sp, quad, model, traj, ex, EFVariant::squared) <= 1e-12);
  }
}

TEST_CASE("constant offset scales with the domain area") {
  const Mesh m = square_mesh();
  const MixedSpace sp = build_space(m, ElementFamily::TaylorHood);
  const ErrorQuadrature quad = build_error_quadrature(m);
  ExactSolution ex;
  ex.velocity = [](double, Point2) -> Vec2 { return {0.7, 0.0}; };
  const std::vector<double> zero(static_cast<size_t>(sp.n_u), 0.0);
  CHECK(velocity_l2_error(sp, quad, zero, ex, 0.3) == doctest::Approx(1.4).epsilon(1e-13));
}

TEST_CASE("convergence csv layout") {
  ConvergenceReport rep;
  rep.family = "mini";
  rep.p = 2.2;
  rep.delta = 1e-4;
  rep.tau = 4e-3;
  rep.K = 250;
  rep.variant = "squared";
  ConvergenceRow r1;
  r1.n = 1;
  r1.h = std::sqrt(2.0);
  r1.e_l2 = 0.4698;
  r1.e_f = 1.256;
  r1.eoc_l2 = r1.eoc_f = r1.eoc_tot = std::nan("");
  ConvergenceRow r2;
  r2.n = 2;
  r2.h = std::sqrt(2.0) / 2.0;
  r2.e_l2 = 0.2451;
  r2.e_f = 1.062;
  r2.eoc_l2 = 0.9387;
  r2.eoc_f = 0.2427;
  r2.eoc_tot = 0.4019;
  rep.rows = {r1, r2};

  std::stringstream out;
  write_convergence_csv(rep, out);
  std::string line;
  std::getline(out, line);
  CHECK(line.substr(0, 1) == "#");
  std::getline(out, line);
  CHECK(line == "n,h,e_L2,EOC_L2,e_F,EOC_F,EOC_tot");
  std::getline(out, line);
  CHECK(line == "1,1.414214e+00,4.698000e-01,,1.256000e+00,,");
  std::getline(out, line);
  CHECK(line == "2,7.071068e-01,2.451000e-01,0.9387,1.062000e+00,0.2427,0.4019");
}
