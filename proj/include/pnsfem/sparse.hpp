#pragma once

#include <iosfwd>
#include <vector>

namespace pnsfem {

// Compressed sparse row matrix with deterministic, sorted column layout.
struct SparseMatrixCSR {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // size rows+1
  std::vector<int> col_indices;
  std::vector<double> values;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  double coeff(int i, int j) const;  // 0 for entries outside the pattern
};

// Accumulation buffer for assembly; duplicate entries are summed on compress.
struct TripletBuffer {
  int rows = 0;
  int cols = 0;

  TripletBuffer(int r, int c) : rows(r), cols(c) {}
  void add(int i, int j, double v) { entries.push_back({i, j, v}); }
  SparseMatrixCSR compress() const;

  struct Entry {
    int i, j;
    double v;
  };
  std::vector<Entry> entries;
};

// Matrix/right-hand-side pair, the unit a linear solve consumes.
struct SparseSystem {
  SparseMatrixCSR matrix;
  std::vector<double> rhs;
};

// 0-based "i j value" lines, one per stored entry, row-major.
void write_coordinate_text(const SparseMatrixCSR& m, std::ostream& out);

// Direct sparse LU solve (pivoting handles indefinite saddle systems).
std::vector<double> sparse_factor_solve(const SparseMatrixCSR& m, const std::vector<double>& rhs);

}  // namespace pnsfem
