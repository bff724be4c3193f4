#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "pnsfem/constitutive.hpp"

using namespace pnsfem;

namespace {

SymTensor2 random_sym(std::mt19937& rng, double amp) {
  std::uniform_real_distribution<double> d(-amp, amp);
  return {d(rng), d(rng), d(rng)};
}

}  // namespace

TEST_CASE("p=2 is Newtonian for any delta") {
  std::mt19937 rng(11);
  for (double delta : {0.0, 1e-4, 0.3}) {
    const StressModel model{2.0, delta, {}};
    for (int i = 0; i < 10; ++i) {
      const SymTensor2 a = random_sym(rng, 2.0);
      const SymTensor2 s = stress(model, 0.0, {}, a);
      CHECK(s.a11 == doctest::Approx(a.a11).epsilon(1e-14));
      CHECK(s.a12 == doctest::Approx(a.a12).epsilon(1e-14));
      CHECK(s.a22 == doctest::Approx(a.a22).epsilon(1e-14));
    }
  }
}

TEST_CASE("shear thinning value against a frozen constant") {
  // (1e-4 + sqrt(2))^(11/5 - 2) at A = diag(1, -1)
  const StressModel model{11.0 / 5.0, 1e-4, {}};
  const SymTensor2 a{1.0, 0.0, -1.0};
  const SymTensor2 s = stress(model, 0.0, {}, a);
  const double factor = 1.0717886192732671;
  CHECK(s.a11 == doctest::Approx(factor).epsilon(1e-14));
  CHECK(s.a12 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.a22 == doctest::Approx(-factor).epsilon(1e-14));

  // the natural map uses half the exponent and no viscosity
  const SymTensor2 f = natural_map_F(model, a);
  CHECK(f.a11 == doctest::Approx(1.0352722440369331).epsilon(1e-14));
}

TEST_CASE("viscosity closure scales the stress") {
  StressModel model{11.0 / 5.0, 1e-2, {}};
  model.nu = [](double t, Point2 x) { return 2.0 + t + x.x; };
  const SymTensor2 a{0.3, -0.1, 0.5};
  const SymTensor2 base = stress(StressModel{11.0 / 5.0, 1e-2, {}}, 0.0, {}, a);
  const SymTensor2 s = stress(model, 1.0, {0.5, 0.0}, a);
  CHECK(s.a11 == doctest::Approx(3.5 * base.a11).epsilon(1e-13));
  CHECK(s.a12 == doctest::Approx(3.5 * base.a12).epsilon(1e-13));
  // F ignores the viscosity
  const SymTensor2 f0 = natural_map_F(StressModel{11.0 / 5.0, 1e-2, {}}, a);
  const SymTensor2 f1 = natural_map_F(model, a);
  CHECK(f0.a11 == f1.a11);
}

TEST_CASE("tangent matches finite differences") {
  std::mt19937 rng(12);
  for (double p : {2.0, 11.0 / 5.0, 3.0}) {
    const StressModel model{p, 1e-3, {}};
    for (int trial = 0; trial < 15; ++trial) {
      const SymTensor2 a = random_sym(rng, 1.5);
      const SymTensor2 h = random_sym(rng, 1.0);
      const StressTangent tan = stress_derivative(model, 0.0, {}, a);
      const double eps = 1e-6;
      const SymTensor2 sp = stress(model, 0.0, {}, a + eps * h);
      const SymTensor2 sm = stress(model, 0.0, {}, a + (-eps) * h);
      const SymTensor2 fd = (1.0 / (2.0 * eps)) * (sp - sm);
      const SymTensor2 an = tan(h);
      const double scale = std::max(1.0, frobenius_norm(an));
      CHECK(std::abs(fd.a11 - an.a11) / scale <= 2e-6);
      CHECK(std::abs(fd.a12 - an.a12) / scale <= 2e-6);
      CHECK(std::abs(fd.a22 - an.a22) / scale <= 2e-6);
      // pair() agrees with applying then contracting
      const SymTensor2 g = random_sym(rng, 1.0);
      CHECK(tan.pair(g, h) == doctest::Approx(ddot(g, tan(h))).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotonicity of the stress") {
  std::mt19937 rng(13);
  for (const StressModel& model :
       {StressModel{11.0 / 5.0, 1e-4, {}}, StressModel{3.0, 0.0, {}}, StressModel{1.8, 1e-2, {}}}) {
    for (int trial = 0; trial < 50; ++trial) {
      const SymTensor2 a = random_sym(rng, 2.0);
      const SymTensor2 b = random_sym(rng, 2.0);
      const SymTensor2 diff = a - b;
      const double pairing = ddot(stress(model, 0.0, {}, a) - stress(model, 0.0, {}, b), diff);
      CHECK(pairing >= -1e-13);
    }
  }
}

TEST_CASE("degenerate origin") {
  // delta = 0, p < 2: the derivative blows up at A = 0
  CHECK_THROWS_AS(stress_derivative(StressModel{1.5, 0.0, {}}, 0.0, {}, SymTensor2{}),
                  std::domain_error);
  // shear thickening: the tangent vanishes in the limit
  const StressTangent flat = stress_derivative(StressModel{11.0 / 5.0, 0.0, {}}, 0.0, {},
                                               SymTensor2{});
  CHECK(flat.c_id == 0.0);
  CHECK(flat.c_dir == 0.0);
  // the stress itself extends continuously by zero
  const SymTensor2 s = stress(StressModel{11.0 / 5.0, 0.0, {}}, 0.0, {}, SymTensor2{});
  CHECK(s.a11 == 0.0);
  CHECK(s.a22 == 0.0);
  // p = 2 keeps the identity tangent
  const StressTangent tan = stress_derivative(StressModel{2.0, 0.0, {}}, 0.0, {}, SymTensor2{});
  CHECK(tan.c_id == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tan.c_dir == 0.0);
}

TEST_CASE("temam kernel vanishes on the diagonal") {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec2 u{d(rng), d(rng)};
    const SymTensor2 du = random_sym(rng, 2.0);
    CHECK(temam_kernel(u, du, u, du) == doctest::Approx(0.0).epsilon(1e-15));
  }
  // hand-checked example: u=(1,0), v=(0,1), Du = [[1,0],[0,0]], Dv = [[0,1],[1,0]]/.. sym
  // (u (x) v):Du uses the symmetric pairing with off-diagonals counted twice
  const Vec2 u{1.0, 0.0}, v{0.0, 1.0};
  const SymTensor2 du{1.0, 0.0, 0.0};
  const SymTensor2 dv{0.0, 1.0, 0.0};
  // outer(u,v) = [[0,1],[0,0]] -> ddot with du = 0; outer(u,u) = e11 -> ddot with dv = 0
  CHECK(temam_kernel(u, du, v, dv) == doctest::Approx(0.0).epsilon(1e-15));
  // asymmetric case with a nonzero value: outer(u,v):du with du = [[0,1],[1,0]]
  const SymTensor2 shear{0.0, 1.0, 0.0};
  // (u(x)v):shear = a12*(u1 v2 + u2 v1) = 1, (u(x)u):dv = a12*(2 u1 u2) = 0
  CHECK(temam_kernel(u, shear, v, dv) == doctest::Approx(0.5 * 1.0 - 0.5 * 0.0).epsilon(1e-14));
}
