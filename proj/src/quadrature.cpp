#include "pnsfem/quadrature.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace pnsfem {

namespace {

// Gauss nodes/weights on (-1,1) for a weight with total mass mu0 and
// symmetric-tridiagonal Jacobi matrix (diag a, offdiag b).
void golub_welsch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = a[i];
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = b[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

// Legendre weight 1 on (-1,1).
void gauss_legendre_ref(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd b(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) b[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  golub_welsch(a, b, 2.0, nodes, weights);
}

// Jacobi weight (1-u) on (-1,1); mapped below to weight (1-t) on (0,1).
void gauss_jacobi10_ref(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::VectorXd a(n);
  Eigen::VectorXd b(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) a[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k) b[k - 1] = std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
  golub_welsch(a, b, 2.0, nodes, weights);
}

}  // namespace

std::vector<IntervalPoint> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  std::vector<double> x, w;
  gauss_legendre_ref(n, x, w);
  std::vector<IntervalPoint> pts(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) pts[i] = {mid + half * x[i], half * w[i]};
  return pts;
}

QuadratureRule triangle_quadrature(int degree) {
  if (degree < 1 || degree > 20) throw std::invalid_argument("triangle_quadrature: degree out of range");
  const int n = (degree + 2) / 2;  // 2n-1 >= degree per direction

  std::vector<double> xl, wl, xj, wj;
  gauss_legendre_ref(n, xl, wl);
  gauss_jacobi10_ref(n, xj, wj);

  // Collapsed-square map x = s(1-t), y = t with Jacobian (1-t); the Jacobi
  // line absorbs the (1-t) factor.
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const double t = 0.5 * (1.0 + xj[j]);
    const double wt = 0.25 * wj[j];
    for (int i = 0; i < n; ++i) {
      const double s = 0.5 * (1.0 + xl[i]);
      const double ws = 0.5 * wl[i];
      QuadraturePoint qp;
      qp.l1 = s * (1.0 - t);
      qp.l2 = t;
      qp.l0 = 1.0 - qp.l1 - qp.l2;
      qp.w = ws * wt;
      rule.points.push_back(qp);
    }
  }
  return rule;
}

}  // namespace pnsfem
