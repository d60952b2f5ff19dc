#include "gqlab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gqlab/errors.hpp"

namespace gqlab {

namespace {

Eigen::VectorXcd random_unit(std::int64_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (std::int64_t i = 0; i < dim; ++i) v[i] = cplx(nd(rng), nd(rng));
  v.normalize();
  return v;
}

SpectrumResult dense_lowest(const SparseHermitianOperator& op,
                            const EigsOptions& opts) {
  Eigen::MatrixXcd M = op.dense();
  M = cplx(0.5, 0.0) * (M + M.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::convergence, "dense eigensolver failed");

  SpectrumResult res;
  res.method = "dense";
  res.seed = opts.seed;
  res.iterations = 0;
  res.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + opts.m);
  if (opts.want_vectors) res.vectors = es.eigenvectors().leftCols(opts.m);
  for (int i = 0; i < opts.m; ++i) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    res.residuals.push_back((op.apply(v) - res.values[i] * v).norm());
  }
  return res;
}

// Block thick-restart Lanczos with full reorthogonalization. The projected
// matrix H = V^dagger M V is kept explicitly, so the Rayleigh-Ritz step is a
// dense Hermitian solve of size <= max_basis. A block of 4 starting vectors
// makes eigenvalue multiplicities up to 4 visible inside a single Krylov
// space (a single-vector recurrence only ever sees one copy per eigenspace).
SpectrumResult lanczos_lowest(const SparseHermitianOperator& op,
                              const EigsOptions& opts) {
  const std::int64_t dim = op.dim;
  const int nev = opts.m;
  int blk = static_cast<int>(std::min<std::int64_t>(4, dim - nev - 1));
  blk = std::max(blk, 1);
  int p = opts.max_basis > 0 ? opts.max_basis
                             : static_cast<int>(std::min<std::int64_t>(
                                   dim - blk, std::max(2 * nev + 32, 64)));
  if (p <= nev + 1)
    p = static_cast<int>(std::min<std::int64_t>(dim - blk, nev + 2));

  std::mt19937_64 rng(opts.seed);
  Eigen::MatrixXcd V(dim, p + blk);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(p + blk, p + blk);
  const double scale = std::max(1.0, op.norm_inf());

  auto fresh_column = [&](int into, int existing) {
    Eigen::VectorXcd f = random_unit(dim, rng);
    if (existing > 0) {
      f -= V.leftCols(existing) * (V.leftCols(existing).adjoint() * f).eval();
      f -= V.leftCols(existing) * (V.leftCols(existing).adjoint() * f).eval();
    }
    f.normalize();
    V.col(into) = f;
  };
  for (int c = 0; c < blk; ++c) fresh_column(c, c);

  int nproc = 0;    // columns whose M-product has been taken
  int ncols = blk;  // orthonormal columns currently in V
  int iterations = 0;
  double best_unconverged = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    // Process columns until p of them have been multiplied; each processed
    // column spawns one residual column, so ncols = nproc + blk throughout.
    while (nproc < p) {
      int j = nproc;
      Eigen::VectorXcd w = op.apply(V.col(j));
      ++iterations;
      Eigen::VectorXcd c1 = V.leftCols(ncols).adjoint() * w;
      w.noalias() -= V.leftCols(ncols) * c1;
      Eigen::VectorXcd c2 = V.leftCols(ncols).adjoint() * w;
      w.noalias() -= V.leftCols(ncols) * c2;
      Eigen::VectorXcd h = c1 + c2;
      for (int i = 0; i < ncols; ++i) {
        H(i, j) = h[i];
        H(j, i) = std::conj(h[i]);
      }
      H(j, j) = cplx(h[j].real(), 0.0);

      double beta = w.norm();
      if (beta < 1e-13 * scale) {
        // Invariant subspace hit: continue in a fresh random direction.
        fresh_column(ncols, ncols);
        H(ncols, j) = H(j, ncols) = cplx(0.0, 0.0);
      } else {
        V.col(ncols) = w / beta;
        H(ncols, j) = H(j, ncols) = cplx(beta, 0.0);
      }
      ++nproc;
      ++ncols;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(p, p));
    if (es.info() != Eigen::Success)
      fail(ErrorKind::convergence, "projected eigensolver failed");
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXcd& Y = es.eigenvectors();

    // M V_p = V_{p+blk} H[., 0..p), so the Ritz residual norm is carried by
    // the blk tail rows of H.
    Eigen::MatrixXcd tail =
        H.block(p, 0, blk, p) * Y.leftCols(std::min(p, nev + 1));
    bool all_ok = true;
    double worst = 0.0;
    for (int i = 0; i < nev; ++i) {
      double est = tail.col(i).norm();
      worst = std::max(worst, est);
      if (est > opts.tol) all_ok = false;
    }
    best_unconverged = std::min(best_unconverged, worst);

    if (all_ok) {
      SpectrumResult res;
      res.method = "lanczos";
      res.seed = opts.seed;
      res.iterations = iterations;
      Eigen::MatrixXcd X = V.leftCols(p) * Y.leftCols(nev);
      bool certified = true;
      for (int i = 0; i < nev; ++i) {
        Eigen::VectorXcd v = X.col(i);
        v.normalize();
        X.col(i) = v;
        double r = (op.apply(v) - theta[i] * v).norm();
        res.values.push_back(theta[i]);
        res.residuals.push_back(r);
        if (r > opts.tol * 1.5) certified = false;
      }
      if (certified) {
        if (opts.want_vectors) res.vectors = std::move(X);
        return res;
      }
      // Estimates were optimistic; keep iterating.
    }

    if (restart == opts.max_restarts) break;

    // Thick restart: keep the lowest Ritz vectors and the unprocessed block.
    int nk = std::min(p - blk - 1,
                      nev + std::max(8, std::min(16, (p - nev) / 2)));
    nk = std::max(nk, 1);
    Eigen::MatrixXcd Vk = V.leftCols(p) * Y.leftCols(nk);
    V.leftCols(nk) = Vk;
    V.middleCols(nk, blk) = V.middleCols(p, blk);
    H.setZero();
    for (int i = 0; i < nk; ++i) H(i, i) = cplx(theta[i], 0.0);
    // Couplings between kept Ritz vectors and the tail block are restored
    // by the Hermitian mirror when the tail columns are processed.
    nproc = nk;
    ncols = nk + blk;
  }

  fail(ErrorKind::convergence,
       "lanczos: no convergence after " + std::to_string(opts.max_restarts) +
           " restarts (best residual estimate " +
           std::to_string(best_unconverged) + ")");
}

}  // namespace

SpectrumResult lowest_eigenpairs(const SparseHermitianOperator& op,
                                 const EigsOptions& opts) {
  if (opts.m < 1) fail(ErrorKind::config, "eigensolver: m must be >= 1");
  if (opts.m >= op.dim)
    fail(ErrorKind::precondition, "eigensolver: m must be < dim");
  if (opts.tol <= 0) fail(ErrorKind::config, "eigensolver: tol must be > 0");

  bool dense = opts.method == EigsOptions::Method::dense ||
               (opts.method == EigsOptions::Method::automatic &&
                op.dim <= opts.dense_threshold);
  SpectrumResult res = dense ? dense_lowest(op, opts) : lanczos_lowest(op, opts);

  for (std::size_t i = 1; i < res.values.size(); ++i)
    if (res.values[i] < res.values[i - 1])
      fail(ErrorKind::internal, "eigenvalues not sorted");
  return res;
}

ClusterReport cluster(const SpectrumResult& result, double gap_threshold) {
  ClusterReport rep;
  rep.threshold = gap_threshold;
  const auto& v = result.values;
  if (v.empty()) return rep;

  Cluster cur;
  cur.members.push_back(0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] - v[i - 1] > gap_threshold) {
      rep.clusters.push_back(cur);
      cur = Cluster{};
    }
    cur.members.push_back(static_cast<int>(i));
  }
  rep.clusters.push_back(cur);

  for (auto& c : rep.clusters) {
    c.multiplicity = static_cast<int>(c.members.size());
    double sum = 0.0;
    for (int i : c.members) sum += v[i];
    c.value = sum / c.multiplicity;
  }
  return rep;
}

double default_cluster_threshold(int k, const SpectrumResult& result) {
  double rmax = 0.0;
  for (double r : result.residuals) rmax = std::max(rmax, r);
  return std::max(0.05 * k, 5.0 * rmax);
}

}  // namespace gqlab
