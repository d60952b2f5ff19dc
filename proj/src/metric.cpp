#include "gqlab/metric.hpp"

#include <atomic>
#include <cmath>
#include <mutex>

#include "gqlab/errors.hpp"
#include "gqlab/parallel.hpp"

namespace gqlab {

Eigen::MatrixXd metric_from_A(const Eigen::MatrixXcd& A,
                              const std::string& where) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) fail(ErrorKind::invalid_structure, where + "A not square");

  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    fail(ErrorKind::invalid_structure,
         where + "A not symmetric (defect " + std::to_string(asym) + ")");

  Eigen::MatrixXd P = A.real();
  Eigen::MatrixXd Q = A.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q,
                                                    Eigen::EigenvaluesOnly);
  double qmin = es.eigenvalues().minCoeff();
  if (qmin <= 1e-12)
    fail(ErrorKind::invalid_structure,
         where + "Im A not positive definite (min eigenvalue " +
             std::to_string(qmin) + ")");

  Eigen::MatrixXd Qinv = Q.inverse();
  Eigen::MatrixXd g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = Q + P * Qinv * P;
  g.topRightCorner(n, n) = -P * Qinv;
  g.bottomLeftCorner(n, n) = -Qinv * P;
  g.bottomRightCorner(n, n) = Qinv;
  g = 0.5 * (g + g.transpose());
  return g;
}

SampledStructure sample_family(const ComplexStructureFamily& fam, double s,
                               const Grid& grid) {
  if (s <= 0.0) fail(ErrorKind::domain, "family parameter s must be positive");
  if (fam.n != grid.n)
    fail(ErrorKind::config, "family n does not match grid n");
  if (grid.n_theta < 4 || grid.n_x < 4)
    fail(ErrorKind::resolution, "family sampling needs >= 4 points per axis");
  if (fam.native_grid && !(*fam.native_grid == grid))
    fail(ErrorKind::config, "tabulated family grid mismatch: file has " +
                                fam.native_grid->str());

  SampledStructure out;
  out.grid = grid;
  out.s = s;
  out.A.resize(grid.sites());

  std::mutex err_mutex;
  std::string first_error;
  parallel_for(grid.sites(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t site = lo; site < hi; ++site) {
      Multi m = grid.decode(site);
      double th[kMaxHalfDim], x[kMaxHalfDim];
      for (int i = 0; i < grid.n; ++i) {
        th[i] = grid.coord(m, i);
        x[i] = grid.coord(m, grid.n + i);
      }
      try {
        Eigen::MatrixXcd A = fam.at(s, x, th);
        // Validation mirrors metric_from_A so failures name the site.
        metric_from_A(A, "site " + std::to_string(site) + ": ");
        out.A[site] = std::move(A);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  });
  if (!first_error.empty())
    fail(ErrorKind::invalid_structure, first_error);
  return out;
}

MetricField family_at(const ComplexStructureFamily& fam, double s,
                      const Grid& grid) {
  SampledStructure st = sample_family(fam, s, grid);
  MetricField mf;
  mf.grid = grid;
  mf.s = s;
  mf.g.resize(grid.sites());
  mf.g_inv.resize(grid.sites());
  parallel_for(grid.sites(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t site = lo; site < hi; ++site) {
      mf.g[site] = metric_from_A(st.A[site]);
      mf.g_inv[site] = mf.g[site].inverse();
    }
  });
  return mf;
}

double integrability_residual(const ComplexStructureFamily& fam, double s,
                              const Grid& grid) {
  if (grid.n_theta < 8 || grid.n_x < 8)
    fail(ErrorKind::resolution,
         "integrability_residual needs >= 8 points per axis");
  SampledStructure st = sample_family(fam, s, grid);
  const int n = grid.n;

  // Centered difference of the sampled A field along a grid axis.
  auto diff = [&](std::int64_t site, const Multi& m, int axis) {
    std::int64_t up = grid.neighbor(m, axis, +1, nullptr);
    std::int64_t dn = grid.neighbor(m, axis, -1, nullptr);
    return Eigen::MatrixXcd(((st.A[up] - st.A[dn]) /
                             (2.0 * grid.spacing(axis)))
                                .eval());
  };

  std::vector<double> worst(thread_count(), 0.0);
  std::atomic<int> wid{0};
  parallel_for(grid.sites(), [&](std::int64_t lo, std::int64_t hi) {
    int w = wid.fetch_add(1);
    double local = 0.0;
    std::vector<Eigen::MatrixXcd> dth(n), dx(n);
    for (std::int64_t site = lo; site < hi; ++site) {
      Multi m = grid.decode(site);
      for (int a = 0; a < n; ++a) {
        dth[a] = diff(site, m, a);
        dx[a] = diff(site, m, n + a);
      }
      const Eigen::MatrixXcd& A = st.A[site];
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            std::complex<double> r = dth[i](j, k) - dth[j](i, k);
            for (int l = 0; l < n; ++l)
              r += A(i, l) * dx[l](j, k) - A(j, l) * dx[l](i, k);
            local = std::max(local, std::abs(r));
          }
    }
    worst[w] = std::max(worst[w], local);
  });
  double res = 0.0;
  for (double v : worst) res = std::max(res, v);
  return res;
}

SemiflatnessReport semiflatness_check(const ComplexStructureFamily& fam,
                                      const Grid& grid, double tol) {
  if (fam.n != grid.n)
    fail(ErrorKind::config, "family n does not match grid n");
  const int n = grid.n;
  std::int64_t theta_sites = 1, x_sites = 1;
  for (int i = 0; i < n; ++i) {
    theta_sites *= grid.n_theta;
    x_sites *= grid.n_x;
  }

  SemiflatnessReport rep;
  for (std::int64_t bx = 0; bx < x_sites; ++bx) {
    // Decode the base multi-index.
    double x[kMaxHalfDim];
    std::int64_t r = bx;
    for (int i = 0; i < n; ++i) {
      x[i] = (r % grid.n_x) * grid.spacing(n);
      r /= grid.n_x;
    }
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::MatrixXd> samples(theta_sites);
    for (std::int64_t bt = 0; bt < theta_sites; ++bt) {
      double th[kMaxHalfDim];
      std::int64_t q = bt;
      for (int i = 0; i < n; ++i) {
        th[i] = (q % grid.n_theta) * grid.spacing(0);
        q /= grid.n_theta;
      }
      samples[bt] = fam.leading_at(x, th).imag();
      avg += samples[bt];
    }
    avg /= static_cast<double>(theta_sites);
    for (auto& sm : samples)
      rep.deviation =
          std::max(rep.deviation, (sm - avg).cwiseAbs().maxCoeff());
  }
  rep.is_semiflat = rep.deviation <= tol;
  return rep;
}

}  // namespace gqlab
