#pragma once

#include <functional>

#include "gqlab/bundle.hpp"
#include "gqlab/metric.hpp"
#include "gqlab/sparse.hpp"

namespace gqlab {

// Link-phase lattice for the covariant derivative of L^k in the connection
// normal form d - ik(x_i + a_i/2pi) dtheta^i:
//   theta_i-edge at base x:  U = exp(-ik (x_i + a_i/2pi) dtheta)   (exact
//     line integral; x is constant along the edge)
//   x-edges:                 U = 1
//   wraparound x_i-edges:    transition phase exp(+ik theta_i) at the
//     site's theta
// Total plaquette flux is 2 pi k per (x_i, theta^i) plane (Chern number k).
struct GaugeLattice {
  Grid grid;
  int k = 1;
  std::vector<double> offsets;  // a_i / 2pi shifts folded into x

  GaugeLattice(const Grid& g, const PrequantumBundle& bundle);

  // Phase of the forward edge (site -> site+e_a); `wraps` marks edges that
  // cross the periodic seam.
  cplx link(const Multi& m, int axis, bool wraps) const;

  // Sum of plaquette phase angles over one (theta^i, x_i) plane through the
  // given base point; equals 2 pi k for every plane and base point.
  double plaquette_flux_sum(int i, const Multi& base) const;
};

// Energy-form discretization of the Bochner Laplacian nabla_k^* nabla_k on
// sections of L^k; Hermitian positive semidefinite by construction.
// `site_weights` overrides the cell-volume measure (same spectrum up to
// rounding for any constant rescaling).
SparseHermitianOperator assemble_bochner(
    const MetricField& metric, const PrequantumBundle& bundle,
    const std::vector<double>& site_weights = {});

// Bochner - nk (kind sharp); with `integrable` set the dbar Laplacian
// (Bochner - nk)/2 (kind dbar) is the natural object instead.
SparseHermitianOperator assemble_sharp(const MetricField& metric,
                                       const PrequantumBundle& bundle,
                                       bool integrable = false);
SparseHermitianOperator assemble_dbar(const MetricField& metric,
                                      const PrequantumBundle& bundle);

// Laplacian of ghat = (dt - (x_i + a_i/2pi) dtheta^i)^2 + g on the circle
// bundle, restricted to the t-Fourier mode -k. The (2n+1)-metric is built
// and inverted independently at every site; the result equals
// assemble_bochner + k^2 I to rounding.
SparseHermitianOperator assemble_circle_reduced(const MetricField& metric,
                                                const PrequantumBundle& bundle);

// Twisted fiber form of the localization estimate on T^n:
//   int (dphi/dtheta^i + ik b_i phi) conj(...) (g_b)^{ij} dtheta.
// `fiber_metric` holds one n x n positive matrix per T^n site (theta axes
// fastest, n_theta points per axis); empty means the Euclidean metric, for
// which the spectrum is ||m + kb||^2 up to finite-difference truncation.
SparseHermitianOperator assemble_fiber_operator(
    const std::vector<double>& b, int k,
    const std::vector<Eigen::MatrixXd>& fiber_metric, int n_theta);

}  // namespace gqlab
