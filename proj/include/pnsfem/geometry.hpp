#pragma once

#include <cmath>

namespace pnsfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

// Velocity values share the point representation.
using Vec2 = Point2;

// Symmetric 2x2 tensor, stored as the independent entries.
struct SymTensor2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;
};

inline SymTensor2 operator+(SymTensor2 a, SymTensor2 b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a22 + b.a22};
}
inline SymTensor2 operator-(SymTensor2 a, SymTensor2 b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22};
}
inline SymTensor2 operator*(double s, SymTensor2 a) {
  return {s * a.a11, s * a.a12, s * a.a22};
}

// Full contraction A:B; the off-diagonal entry counts twice.
inline double ddot(SymTensor2 a, SymTensor2 b) {
  return a.a11 * b.a11 + 2.0 * a.a12 * b.a12 + a.a22 * b.a22;
}
inline double frobenius_norm(SymTensor2 a) { return std::sqrt(ddot(a, a)); }

// A applied to a vector.
inline Vec2 apply(SymTensor2 a, Vec2 v) {
  return {a.a11 * v.x + a.a12 * v.y, a.a12 * v.x + a.a22 * v.y};
}

// (a (x) b) : D for symmetric D.
inline double outer_ddot(Vec2 a, Vec2 b, SymTensor2 d) {
  return d.a11 * a.x * b.x + d.a12 * (a.x * b.y + a.y * b.x) + d.a22 * a.y * b.y;
}

// Symmetric part of the outer product a (x) b.
inline SymTensor2 sym_outer(Vec2 a, Vec2 b) {
  return {a.x * b.x, 0.5 * (a.x * b.y + a.y * b.x), a.y * b.y};
}

// Full 2x2 matrix, row major; used for velocity gradients.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;
};

inline SymTensor2 sym(Mat2 g) {
  return {g.a11, 0.5 * (g.a12 + g.a21), g.a22};
}

}  // namespace pnsfem
