#include "gqlab/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "gqlab/errors.hpp"
#include "gqlab/parallel.hpp"

namespace gqlab {

const char* operator_kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::bochner: return "bochner";
    case OperatorKind::sharp: return "sharp";
    case OperatorKind::dbar: return "dbar";
    case OperatorKind::fiber: return "fiber";
    case OperatorKind::circle_reduced: return "circle_reduced";
  }
  return "unknown";
}

void SparseHermitianOperator::matvec(const cplx* x, cplx* y) const {
  parallel_for(dim, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      cplx acc(0.0, 0.0);
      for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
        acc += val[p] * x[col[p]];
      y[r] = acc;
    }
  });
}

Eigen::VectorXcd SparseHermitianOperator::apply(
    const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(dim);
  matvec(x.data(), y.data());
  return y;
}

double SparseHermitianOperator::norm_inf() const {
  double best = 0.0;
  for (std::int64_t r = 0; r < dim; ++r) {
    double acc = 0.0;
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      acc += std::abs(val[p]);
    best = std::max(best, acc);
  }
  return best;
}

double SparseHermitianOperator::hermiticity_defect() const {
  // Hash the strict upper triangle, then match against the lower one.
  std::unordered_map<std::int64_t, cplx> upper;
  upper.reserve(val.size());
  double defect = 0.0;
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      std::int64_t c = col[p];
      if (c == r) {
        defect = std::max(defect, std::abs(val[p].imag()));
      } else if (c > r) {
        upper[r * dim + c] = val[p];
      }
    }
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
      std::int64_t c = col[p];
      if (c >= r) continue;
      auto it = upper.find(c * dim + r);
      cplx mirror = (it == upper.end()) ? cplx(0, 0) : it->second;
      defect = std::max(defect, std::abs(val[p] - std::conj(mirror)));
      if (it != upper.end()) upper.erase(it);
    }
  for (const auto& kv : upper) defect = std::max(defect, std::abs(kv.second));
  return defect;
}

void SparseHermitianOperator::shift_diagonal(double c) {
  for (std::int64_t r = 0; r < dim; ++r) {
    bool found = false;
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      if (col[p] == r) {
        val[p] += c;
        found = true;
        break;
      }
    if (!found)
      fail(ErrorKind::internal, "shift_diagonal: missing diagonal entry");
  }
}

void SparseHermitianOperator::scale(double c) {
  for (auto& v : val) v *= c;
}

Eigen::MatrixXcd SparseHermitianOperator::dense() const {
  if (dim > 8192) fail(ErrorKind::internal, "dense(): operator too large");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      m(r, col[p]) += val[p];
  return m;
}

SparseHermitianOperator TripletBuffer::build() const {
  std::vector<std::int64_t> order(entries_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) {
                     const Entry& ea = entries_[a];
                     const Entry& eb = entries_[b];
                     return ea.r != eb.r ? ea.r < eb.r : ea.c < eb.c;
                   });

  SparseHermitianOperator op;
  op.dim = dim_;
  op.row_ptr.assign(dim_ + 1, 0);
  for (std::size_t i = 0; i < order.size();) {
    const Entry& e = entries_[order[i]];
    cplx acc(0, 0);
    std::size_t j = i;
    while (j < order.size() && entries_[order[j]].r == e.r &&
           entries_[order[j]].c == e.c)
      acc += entries_[order[j++]].v;
    op.col.push_back(e.c);
    op.val.push_back(acc);
    op.row_ptr[e.r + 1]++;
    i = j;
  }
  for (std::int64_t r = 0; r < dim_; ++r) op.row_ptr[r + 1] += op.row_ptr[r];
  return op;
}

void write_coordinate_file(const SparseHermitianOperator& op,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::config, "cannot write '" + path + "'");
  out << op.dim << " " << op.nnz() << "\n";
  char line[128];
  for (std::int64_t r = 0; r < op.dim; ++r)
    for (std::int64_t p = op.row_ptr[r]; p < op.row_ptr[r + 1]; ++p) {
      std::snprintf(line, sizeof(line), "%lld %lld %.17g %.17g\n",
                    static_cast<long long>(r),
                    static_cast<long long>(op.col[p]), op.val[p].real(),
                    op.val[p].imag());
      out << line;
    }
}

}  // namespace gqlab
