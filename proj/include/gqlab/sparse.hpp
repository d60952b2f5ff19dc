#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gqlab/grid.hpp"

namespace gqlab {

using cplx = std::complex<double>;

enum class OperatorKind { bochner, sharp, dbar, fiber, circle_reduced };

const char* operator_kind_name(OperatorKind k);

// Assembled lattice operator in CSR form. Always Hermitian; the bochner kind
// is positive semidefinite by construction. `weight` records the site measure
// used in the symmetric normalization W^{-1/2} M W^{-1/2}, so |u|^2 of an
// eigenvector component is already the measure-weighted density.
struct SparseHermitianOperator {
  std::int64_t dim = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int64_t> col;
  std::vector<cplx> val;

  OperatorKind kind = OperatorKind::bochner;
  int k = 0;
  double s = 1.0;
  Grid grid;
  std::vector<double> weight;

  std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }

  void matvec(const cplx* x, cplx* y) const;  // y = M x, parallel over rows
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

  double norm_inf() const;           // max row sum of |entries|
  double hermiticity_defect() const;  // max |M - M^dagger|
  void shift_diagonal(double c);      // M += c I
  void scale(double c);               // M *= c
  Eigen::MatrixXcd dense() const;     // guarded by a size check
};

// Deterministic triplet accumulator: entries are merged by (row, col) after a
// stable sort, so assembly order does not affect the result bit pattern.
class TripletBuffer {
 public:
  explicit TripletBuffer(std::int64_t dim) : dim_(dim) {}
  void add(std::int64_t r, std::int64_t c, cplx v) {
    entries_.push_back({r, c, v});
  }
  SparseHermitianOperator build() const;

 private:
  struct Entry {
    std::int64_t r, c;
    cplx v;
  };
  std::int64_t dim_;
  std::vector<Entry> entries_;
};

// Coordinate-list text format: "dim nnz" header, then "row col re im" lines,
// 0-indexed.
void write_coordinate_file(const SparseHermitianOperator& op,
                           const std::string& path);

}  // namespace gqlab
