#pragma once

#include <functional>

#include "pnsfem/geometry.hpp"

namespace pnsfem {

// Extra stress S(t,x,A) = nu(t,x) (delta + |A|)^(p-2) A acting on symmetric
// tensors.  nu must be positive and bounded; time dependence enters only
// through nu.
struct StressModel {
  double p = 2.0;
  double delta = 0.0;
  std::function<double(double t, Point2 x)> nu;  // empty means nu == 1

  double viscosity(double t, Point2 x) const { return nu ? nu(t, x) : 1.0; }
};

SymTensor2 stress(const StressModel& model, double t, Point2 x, SymTensor2 a);

// Frechet derivative of A -> S(t,x,A): DS[A]H = c_id H + c_dir (A:H) A.
struct StressTangent {
  double c_id = 0.0;
  double c_dir = 0.0;
  SymTensor2 a;

  SymTensor2 operator()(SymTensor2 h) const { return c_id * h + (c_dir * ddot(a, h)) * a; }
  double pair(SymTensor2 g, SymTensor2 h) const {  // (DS[A]H) : G
    return c_id * ddot(g, h) + c_dir * ddot(a, h) * ddot(a, g);
  }
};

StressTangent stress_derivative(const StressModel& model, double t, Point2 x, SymTensor2 a);

// Natural distance map F(A) = (delta + |A|)^((p-2)/2) A; no viscosity factor.
SymTensor2 natural_map_F(const StressModel& model, SymTensor2 a);

// Pointwise density of the modified convection pairing <Bhat u, v> =
// 1/2 (u(x)v):Du - 1/2 (u(x)u):Dv.
double temam_kernel(Vec2 u, SymTensor2 du, Vec2 v, SymTensor2 dv);

}  // namespace pnsfem
