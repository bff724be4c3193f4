#include "pnsfem/sparse.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace pnsfem {

void SparseMatrixCSR::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("multiply: size mismatch");
  y.assign(static_cast<size_t>(rows), 0.0);
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) acc += values[k] * x[col_indices[k]];
    y[i] = acc;
  }
}

double SparseMatrixCSR::coeff(int i, int j) const {
  for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
    if (col_indices[k] == j) return values[k];
  return 0.0;
}

SparseMatrixCSR TripletBuffer::compress() const {
  std::vector<Entry> sorted = entries;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  SparseMatrixCSR m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(static_cast<size_t>(rows) + 1, 0);
  for (size_t k = 0; k < sorted.size();) {
    const int i = sorted[k].i, j = sorted[k].j;
    if (i < 0 || i >= rows || j < 0 || j >= cols) throw std::out_of_range("triplet out of range");
    double v = 0.0;
    while (k < sorted.size() && sorted[k].i == i && sorted[k].j == j) v += sorted[k++].v;
    m.col_indices.push_back(j);
    m.values.push_back(v);
    ++m.row_offsets[i + 1];
  }
  for (int i = 0; i < rows; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

void write_coordinate_text(const SparseMatrixCSR& m, std::ostream& out) {
  out.precision(17);
  for (int i = 0; i < m.rows; ++i)
    for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
      out << i << " " << m.col_indices[k] << " " << m.values[k] << "\n";
}

std::vector<double> sparse_factor_solve(const SparseMatrixCSR& m, const std::vector<double>& rhs) {
  if (m.rows != m.cols) throw std::invalid_argument("sparse_factor_solve: matrix not square");
  if (static_cast<int>(rhs.size()) != m.rows)
    throw std::invalid_argument("sparse_factor_solve: rhs size mismatch");

  Eigen::SparseMatrix<double> a(m.rows, m.cols);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.values.size());
  for (int i = 0; i < m.rows; ++i)
    for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
      trips.emplace_back(i, m.col_indices[k], m.values[k]);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("sparse_factor_solve: factorization failed (singular matrix?)");

  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), m.rows);
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse_factor_solve: solve failed");
  return std::vector<double>(x.data(), x.data() + m.rows);
}

}  // namespace pnsfem
