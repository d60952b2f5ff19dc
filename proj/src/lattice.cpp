#include "gqlab/lattice.hpp"

#include <cmath>

#include "gqlab/errors.hpp"

namespace gqlab {

namespace {

// Product-of-rings view shared by the torus lattice and the fiber operator.
struct RingProduct {
  int naxes = 0;
  std::array<int, 2 * kMaxHalfDim> points{};
  std::array<double, 2 * kMaxHalfDim> spacing{};

  std::int64_t sites() const {
    std::int64_t m = 1;
    for (int a = 0; a < naxes; ++a) m *= points[a];
    return m;
  }
  Multi decode(std::int64_t idx) const {
    Multi m{};
    for (int a = 0; a < naxes; ++a) {
      m[a] = static_cast<int>(idx % points[a]);
      idx /= points[a];
    }
    return m;
  }
  std::int64_t encode(const Multi& m) const {
    std::int64_t idx = 0;
    for (int a = naxes - 1; a >= 0; --a) idx = idx * points[a] + m[a];
    return idx;
  }
  std::int64_t neighbor(const Multi& m, int a, int step, bool* wraps) const {
    Multi q = m;
    int v = q[a] + step;
    bool w = false;
    if (v >= points[a]) {
      v -= points[a];
      w = true;
    } else if (v < 0) {
      v += points[a];
      w = true;
    }
    q[a] = v;
    if (wraps) *wraps = w;
    return encode(q);
  }
};

using LinkFn = std::function<cplx(const Multi&, int axis, bool wraps)>;
using GinvFn = std::function<const Eigen::MatrixXd&(std::int64_t site)>;

// Energy-form assembly
//   E(psi) = sum_p w_p g^{ab}(p) (D_a psi)(D_b psi)^*
// with forward covariant edge differences for the diagonal terms (edge
// coefficients averaged between the endpoints) and symmetrized centered
// differences for the cross terms. The mean-vs-centered inequality makes the
// assembled form PSD for every positive definite g^{ab} and positive weight.
// Returned matrix is W^{-1/2} M W^{-1/2} for the mass W = diag(w).
SparseHermitianOperator assemble_quadratic_form(
    const RingProduct& lat, const LinkFn& link, const GinvFn& ginv,
    const std::vector<double>& weight, const std::vector<double>& extra_diag) {
  const std::int64_t nsites = lat.sites();
  TripletBuffer buf(nsites);

  for (std::int64_t p = 0; p < nsites; ++p) {
    Multi mp = lat.decode(p);
    const Eigen::MatrixXd& gi_p = ginv(p);
    const double wp = weight[p];

    // Axis terms, forward edges only.
    for (int a = 0; a < lat.naxes; ++a) {
      bool wraps = false;
      std::int64_t q = lat.neighbor(mp, a, +1, &wraps);
      cplx u = link(mp, a, wraps);
      double h = lat.spacing[a];
      double c = 0.5 * (wp * gi_p(a, a) + weight[q] * ginv(q)(a, a)) / (h * h);
      buf.add(p, p, c);
      buf.add(q, q, c);
      buf.add(p, q, -c * u);
      buf.add(q, p, -c * std::conj(u));
    }

    // Cross terms from centered covariant differences.
    for (int a = 0; a < lat.naxes; ++a) {
      for (int b = a + 1; b < lat.naxes; ++b) {
        double gab = gi_p(a, b);
        if (gab == 0.0) continue;
        std::int64_t stencil[2][2];
        cplx coef[2][2];
        for (int axpos = 0; axpos < 2; ++axpos) {
          int ax = (axpos == 0) ? a : b;
          bool wraps = false;
          std::int64_t up = lat.neighbor(mp, ax, +1, &wraps);
          cplx uu = link(mp, ax, wraps);
          std::int64_t dn = lat.neighbor(mp, ax, -1, &wraps);
          Multi mdn = lat.decode(dn);
          cplx ud = link(mdn, ax, wraps);
          double inv2h = 1.0 / (2.0 * lat.spacing[ax]);
          stencil[axpos][0] = up;
          coef[axpos][0] = uu * inv2h;
          stencil[axpos][1] = dn;
          coef[axpos][1] = -std::conj(ud) * inv2h;
        }
        for (int iu = 0; iu < 2; ++iu)
          for (int iv = 0; iv < 2; ++iv) {
            std::int64_t ua = stencil[0][iu], ub = stencil[1][iv];
            cplx ca = coef[0][iu], cb = coef[1][iv];
            buf.add(ub, ua, wp * gab * ca * std::conj(cb));
            buf.add(ua, ub, wp * gab * cb * std::conj(ca));
          }
      }
    }

    if (!extra_diag.empty() && extra_diag[p] != 0.0)
      buf.add(p, p, wp * extra_diag[p]);
  }

  SparseHermitianOperator op = buf.build();
  // Symmetric mass normalization.
  for (std::int64_t r = 0; r < op.dim; ++r) {
    double wr = std::sqrt(weight[r]);
    for (std::int64_t q = op.row_ptr[r]; q < op.row_ptr[r + 1]; ++q)
      op.val[q] /= wr * std::sqrt(weight[op.col[q]]);
  }
  op.weight = weight;

  for (std::int64_t r = 0; r < op.dim; ++r) {
    bool has_diag = false;
    for (std::int64_t q = op.row_ptr[r]; q < op.row_ptr[r + 1]; ++q)
      if (op.col[q] == r) {
        has_diag = true;
        if (op.val[q].real() < 0.0 || std::abs(op.val[q].imag()) > 1e-13)
          fail(ErrorKind::internal, "assembly produced a bad diagonal entry");
      }
    if (!has_diag) fail(ErrorKind::internal, "assembly lost a diagonal entry");
  }
  return op;
}

RingProduct ring_of(const Grid& grid) {
  RingProduct lat;
  lat.naxes = grid.axes();
  for (int a = 0; a < lat.naxes; ++a) {
    lat.points[a] = grid.points(a);
    lat.spacing[a] = grid.spacing(a);
  }
  return lat;
}

void check_inputs(const MetricField& metric, const PrequantumBundle& bundle) {
  if (metric.grid.n != bundle.n)
    fail(ErrorKind::config, "metric and bundle dimensions disagree");
  if (static_cast<std::int64_t>(metric.g.size()) != metric.grid.sites())
    fail(ErrorKind::config, "metric sample count does not match its grid");
}

}  // namespace

GaugeLattice::GaugeLattice(const Grid& g, const PrequantumBundle& bundle)
    : grid(g), k(bundle.k) {
  if (g.n != bundle.n)
    fail(ErrorKind::config, "lattice and bundle dimensions disagree");
  offsets.resize(g.n);
  for (int i = 0; i < g.n; ++i)
    offsets[i] = bundle.holonomy_offsets[i] / kTwoPi;
}

cplx GaugeLattice::link(const Multi& m, int axis, bool wraps) const {
  if (grid.is_theta_axis(axis)) {
    int i = axis;
    double xi = grid.coord(m, grid.n + i) + offsets[i];
    return std::polar(1.0, -k * xi * grid.spacing(axis));
  }
  if (!wraps) return cplx(1.0, 0.0);
  int i = axis - grid.n;
  double theta_i = grid.coord(m, i);
  return std::polar(1.0, k * theta_i);
}

double GaugeLattice::plaquette_flux_sum(int i, const Multi& base) const {
  RingProduct lat = ring_of(grid);
  int a = i;            // theta^i axis
  int b = grid.n + i;   // x_i axis
  double sum = 0.0;
  Multi m = base;
  for (int tt = 0; tt < grid.n_theta; ++tt) {
    m[a] = tt;
    for (int xx = 0; xx < grid.n_x; ++xx) {
      m[b] = xx;
      bool wa = false, wb = false;
      std::int64_t pa = lat.neighbor(m, a, +1, &wa);
      Multi ma = lat.decode(pa);
      std::int64_t pb = lat.neighbor(m, b, +1, &wb);
      Multi mb = lat.decode(pb);
      bool wa2 = false, wb2 = false;
      lat.neighbor(mb, a, +1, &wa2);
      lat.neighbor(ma, b, +1, &wb2);
      cplx hol = link(m, a, wa) * link(ma, b, wb2) *
                 std::conj(link(mb, a, wa2)) * std::conj(link(m, b, wb));
      sum += std::arg(hol);
    }
  }
  return sum;
}

SparseHermitianOperator assemble_bochner(
    const MetricField& metric, const PrequantumBundle& bundle,
    const std::vector<double>& site_weights) {
  check_inputs(metric, bundle);
  const Grid& grid = metric.grid;
  GaugeLattice gauge(grid, bundle);
  RingProduct lat = ring_of(grid);

  std::vector<double> w = site_weights;
  if (w.empty()) w.assign(grid.sites(), grid.cell_volume());
  if (static_cast<std::int64_t>(w.size()) != grid.sites())
    fail(ErrorKind::config, "site weight count does not match the grid");

  SparseHermitianOperator op = assemble_quadratic_form(
      lat,
      [&gauge](const Multi& m, int a, bool wr) { return gauge.link(m, a, wr); },
      [&metric](std::int64_t s) -> const Eigen::MatrixXd& {
        return metric.g_inv[s];
      },
      w, {});
  op.kind = OperatorKind::bochner;
  op.k = bundle.k;
  op.s = metric.s;
  op.grid = grid;
  return op;
}

SparseHermitianOperator assemble_sharp(const MetricField& metric,
                                       const PrequantumBundle& bundle,
                                       bool integrable) {
  SparseHermitianOperator op = assemble_bochner(metric, bundle);
  op.shift_diagonal(-static_cast<double>(metric.grid.n) * bundle.k);
  op.kind = OperatorKind::sharp;
  if (integrable) {
    op.scale(0.5);
    op.kind = OperatorKind::dbar;
  }
  return op;
}

SparseHermitianOperator assemble_dbar(const MetricField& metric,
                                      const PrequantumBundle& bundle) {
  return assemble_sharp(metric, bundle, true);
}

SparseHermitianOperator assemble_circle_reduced(
    const MetricField& metric, const PrequantumBundle& bundle) {
  check_inputs(metric, bundle);
  const Grid& grid = metric.grid;
  const int n = grid.n;
  const int dim_hat = 2 * n + 1;
  const int k = bundle.k;
  RingProduct lat = ring_of(grid);
  const std::int64_t nsites = grid.sites();

  // Per-site reduction of the circle-bundle metric: build ghat, invert it,
  // and recover the frame data (base inverse block, connection coefficients,
  // vertical coefficient) from the inverse alone.
  std::vector<Eigen::MatrixXd> gi_base(nsites);
  std::vector<Eigen::VectorXd> alpha(nsites);
  std::vector<double> c0(nsites);
  for (std::int64_t p = 0; p < nsites; ++p) {
    Multi m = grid.decode(p);
    Eigen::MatrixXd ghat = Eigen::MatrixXd::Zero(dim_hat, dim_hat);
    ghat(0, 0) = 1.0;
    for (int i = 0; i < n; ++i) {
      double xi =
          grid.coord(m, n + i) + bundle.holonomy_offsets[i] / kTwoPi;
      ghat(0, 1 + i) = ghat(1 + i, 0) = -xi;
    }
    ghat.block(1, 1, 2 * n, 2 * n) = metric.g[p];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ghat(1 + i, 1 + j) += ghat(0, 1 + i) * ghat(0, 1 + j);

    Eigen::MatrixXd ghat_inv = ghat.inverse();
    gi_base[p] = ghat_inv.block(1, 1, 2 * n, 2 * n);
    Eigen::VectorXd gt = ghat_inv.block(0, 1, 1, 2 * n).transpose();
    alpha[p] = gi_base[p].ldlt().solve(gt);
    c0[p] = ghat_inv(0, 0) - gt.dot(alpha[p]);
  }

  std::vector<double> w(nsites, grid.cell_volume());
  std::vector<double> extra(nsites);
  for (std::int64_t p = 0; p < nsites; ++p)
    extra[p] = static_cast<double>(k) * k * c0[p];

  auto link = [&](const Multi& m, int a, bool wraps) -> cplx {
    std::int64_t p = lat.encode(m);
    double phase = -k * alpha[p](a) * lat.spacing[a];
    if (!grid.is_theta_axis(a) && wraps)
      phase += k * grid.coord(m, a - n);
    return std::polar(1.0, phase);
  };

  SparseHermitianOperator op = assemble_quadratic_form(
      lat, link,
      [&gi_base](std::int64_t s) -> const Eigen::MatrixXd& {
        return gi_base[s];
      },
      w, extra);
  op.kind = OperatorKind::circle_reduced;
  op.k = k;
  op.s = metric.s;
  op.grid = grid;
  return op;
}

SparseHermitianOperator assemble_fiber_operator(
    const std::vector<double>& b, int k,
    const std::vector<Eigen::MatrixXd>& fiber_metric, int n_theta) {
  const int n = static_cast<int>(b.size());
  if (n < 1 || n > kMaxHalfDim)
    fail(ErrorKind::config, "fiber operator: bad dimension");
  if (n_theta < 4)
    fail(ErrorKind::resolution, "fiber operator needs >= 4 points per axis");

  RingProduct lat;
  lat.naxes = n;
  for (int a = 0; a < n; ++a) {
    lat.points[a] = n_theta;
    lat.spacing[a] = kTwoPi / n_theta;
  }
  const std::int64_t nsites = lat.sites();

  std::vector<Eigen::MatrixXd> gi(nsites);
  if (fiber_metric.empty()) {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (auto& m : gi) m = id;
  } else {
    if (static_cast<std::int64_t>(fiber_metric.size()) != nsites)
      fail(ErrorKind::config, "fiber metric sample count mismatch");
    for (std::int64_t p = 0; p < nsites; ++p) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          fiber_metric[p], Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() <= 1e-12)
        fail(ErrorKind::invalid_structure,
             "fiber metric degenerate at site " + std::to_string(p));
      gi[p] = fiber_metric[p].inverse();
    }
  }

  std::vector<double> w(nsites, std::pow(kTwoPi / n_theta, n));
  auto link = [&](const Multi&, int a, bool) -> cplx {
    return std::polar(1.0, k * b[a] * lat.spacing[a]);
  };

  SparseHermitianOperator op = assemble_quadratic_form(
      lat, link,
      [&gi](std::int64_t s) -> const Eigen::MatrixXd& { return gi[s]; }, w,
      {});
  op.kind = OperatorKind::fiber;
  op.k = k;
  op.grid = Grid(n, n_theta, 4);  // metadata only; x axes unused
  return op;
}

}  // namespace gqlab
