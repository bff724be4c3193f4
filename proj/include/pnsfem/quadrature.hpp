#pragma once

#include <vector>

#include "pnsfem/geometry.hpp"

namespace pnsfem {

// Quadrature point on the reference triangle (0,0)-(1,0)-(0,1), barycentric
// coordinates (l0,l1,l2) with l0+l1+l2 = 1.  Weights include the reference
// area, so they sum to 1/2.
struct QuadraturePoint {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0;
  double w = 0.0;
};

struct QuadratureRule {
  int degree = 0;
  std::vector<QuadraturePoint> points;
};

// Positive-weight rule exact for polynomials of total degree <= degree
// (conical product of Gauss-Legendre and Gauss-Jacobi lines).
QuadratureRule triangle_quadrature(int degree);

// n-point Gauss-Legendre nodes/weights on (a,b); exact to degree 2n-1.
struct IntervalPoint {
  double x = 0.0;
  double w = 0.0;
};
std::vector<IntervalPoint> gauss_legendre(int n, double a, double b);

}  // namespace pnsfem
