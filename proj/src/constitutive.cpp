#include "pnsfem/constitutive.hpp"

#include <cmath>
#include <stdexcept>

namespace pnsfem {

SymTensor2 stress(const StressModel& model, double t, Point2 x, SymTensor2 a) {
  const double nu = model.viscosity(t, x);
  const double s = model.delta + frobenius_norm(a);
  if (s == 0.0) return {};  // p >= 2 limit; the tensor factor vanishes anyway
  return (nu * std::pow(s, model.p - 2.0)) * a;
}

StressTangent stress_derivative(const StressModel& model, double t, Point2 x, SymTensor2 a) {
  const double nu = model.viscosity(t, x);
  const double na = frobenius_norm(a);
  const double s = model.delta + na;
  StressTangent tan;
  tan.a = a;
  if (s == 0.0) {
    if (model.p < 2.0)
      throw std::domain_error("stress_derivative: not differentiable at A=0 for delta=0, p<2");
    // p == 2: identity scale nu; p > 2: derivative vanishes.
    tan.c_id = (model.p == 2.0) ? nu : 0.0;
    return tan;
  }
  tan.c_id = nu * std::pow(s, model.p - 2.0);
  tan.c_dir = (na > 0.0) ? nu * (model.p - 2.0) * std::pow(s, model.p - 3.0) / na : 0.0;
  return tan;
}

SymTensor2 natural_map_F(const StressModel& model, SymTensor2 a) {
  const double s = model.delta + frobenius_norm(a);
  if (s == 0.0) return {};
  return std::pow(s, 0.5 * (model.p - 2.0)) * a;
}

double temam_kernel(Vec2 u, SymTensor2 du, Vec2 v, SymTensor2 dv) {
  return 0.5 * outer_ddot(u, v, du) - 0.5 * outer_ddot(u, u, dv);
}

}  // namespace pnsfem
