#include "gqlab/curvature.hpp"

#include <cmath>

#include "gqlab/errors.hpp"
#include "gqlab/parallel.hpp"

namespace gqlab {

namespace {

// 4th-order centered first derivative of a matrix field along a grid axis.
std::vector<Eigen::MatrixXd> derivative_field(
    const Grid& grid, const std::vector<Eigen::MatrixXd>& f, int axis) {
  std::vector<Eigen::MatrixXd> df(f.size());
  const double h = grid.spacing(axis);
  parallel_for(grid.sites(), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t p = lo; p < hi; ++p) {
      Multi m = grid.decode(p);
      Multi m1 = m, m2 = m;
      m1[axis] = (m[axis] + 1) % grid.points(axis);
      m2[axis] = (m[axis] + 2) % grid.points(axis);
      std::int64_t p1 = grid.encode(m1), p2 = grid.encode(m2);
      m1[axis] = (m[axis] - 1 + grid.points(axis)) % grid.points(axis);
      m2[axis] = (m[axis] - 2 + 2 * grid.points(axis)) % grid.points(axis);
      std::int64_t q1 = grid.encode(m1), q2 = grid.encode(m2);
      df[p] = (-f[p2] + 8.0 * f[p1] - 8.0 * f[q1] + f[q2]) / (12.0 * h);
    }
  });
  return df;
}

}  // namespace

CurvatureReport ricci_field(const MetricField& metric) {
  const Grid& grid = metric.grid;
  if (grid.n_theta < 16 || grid.n_x < 16)
    fail(ErrorKind::resolution, "ricci_field needs >= 16 points per axis");
  const int D = grid.axes();
  const std::int64_t nsites = grid.sites();

  // dg[c][site](i,j) = d g_ij / d xi^c.
  std::vector<std::vector<Eigen::MatrixXd>> dg(D);
  for (int c = 0; c < D; ++c) dg[c] = derivative_field(grid, metric.g, c);

  // Christoffels packed as Gamma[site](k, i*D+j).
  std::vector<Eigen::MatrixXd> gamma(nsites);
  parallel_for(nsites, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t p = lo; p < hi; ++p) {
      const Eigen::MatrixXd& gi = metric.g_inv[p];
      Eigen::MatrixXd g1(D, D * D);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          for (int l = 0; l < D; ++l)
            g1(l, i * D + j) =
                0.5 * (dg[i][p](j, l) + dg[j][p](i, l) - dg[l][p](i, j));
      gamma[p] = gi * g1;  // Gamma^k_ij = g^{kl} g1(l, ij)
    }
  });

  std::vector<std::vector<Eigen::MatrixXd>> dgamma(D);
  for (int c = 0; c < D; ++c) dgamma[c] = derivative_field(grid, gamma, c);

  CurvatureReport rep;
  rep.grid = grid;
  rep.s = metric.s;
  rep.ricci.resize(nsites);
  rep.ricci_hat_base.resize(nsites);

  std::vector<double> kmin(thread_count(),
                           std::numeric_limits<double>::infinity());
  std::vector<double> asym(thread_count(), 0.0);
  std::vector<double> fdef(thread_count(), 0.0);
  std::atomic<int> wid{0};

  // Constant matrix of omega = dx_i ^ dtheta^i in the (theta, x) frame.
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i < grid.n; ++i) {
    omega(i, grid.n + i) = -1.0;
    omega(grid.n + i, i) = 1.0;
  }

  parallel_for(nsites, [&](std::int64_t lo, std::int64_t hi) {
    int w = wid.fetch_add(1);
    for (std::int64_t p = lo; p < hi; ++p) {
      Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(D, D);
      const Eigen::MatrixXd& G = gamma[p];
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
          double v = 0.0;
          for (int c = 0; c < D; ++c) {
            v += dgamma[c][p](c, i * D + j);
            v -= dgamma[j][p](c, c * D + i);
            for (int d = 0; d < D; ++d)
              v += G(c, c * D + d) * G(d, i * D + j) -
                   G(c, j * D + d) * G(d, c * D + i);
          }
          ric(i, j) = v;
        }
      asym[w] = std::max(asym[w],
                         (ric - ric.transpose()).cwiseAbs().maxCoeff());
      ric = 0.5 * (ric + ric.transpose()).eval();
      rep.ricci[p] = ric;
      rep.ricci_hat_base[p] = ric - 0.5 * metric.g[p];

      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
          ric, metric.g[p], Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
      kmin[w] = std::min(kmin[w], ges.eigenvalues().minCoeff());

      Eigen::MatrixXd fsf = omega * metric.g_inv[p] * omega.transpose();
      fdef[w] = std::max(fdef[w],
                         (fsf - metric.g[p]).cwiseAbs().maxCoeff());
    }
  });

  rep.kappa_rel_min = std::numeric_limits<double>::infinity();
  for (double v : kmin) rep.kappa_rel_min = std::min(rep.kappa_rel_min, v);
  for (double v : asym)
    rep.max_ricci_asymmetry = std::max(rep.max_ricci_asymmetry, v);
  for (double v : fdef) rep.fstarf_defect = std::max(rep.fstarf_defect, v);
  rep.kappa_hat = rep.kappa_rel_min / metric.s;
  rep.ric_hat_mixed = 0.0;
  rep.ric_hat_fiber = 0.5 * grid.n;
  return rep;
}

RicciBoundProbe semiflat_ricci_bound_probe(const ComplexStructureFamily& fam,
                                           const std::vector<double>& s_list,
                                           const Grid& grid) {
  if (s_list.empty()) fail(ErrorKind::config, "ricci probe: empty s list");
  RicciBoundProbe probe;
  probe.s_values = s_list;
  if (!fam.claims_integrable)
    probe.warning = fam.claims_heart
                        ? "family is heart-type, not integrable: the "
                          "Ricci-bound equivalence is used outside its "
                          "hypothesis"
                        : "family is not integrable";

  for (double s : s_list) {
    CurvatureReport rep = ricci_field(family_at(fam, s, grid));
    probe.kappa_hat.push_back(rep.kappa_hat);
  }

  double first = probe.kappa_hat.front();
  double band = 0.25 * std::max(1.0, std::abs(first));
  probe.bounded = true;
  for (double v : probe.kappa_hat)
    if (v < first - band) probe.bounded = false;
  return probe;
}

}  // namespace gqlab
