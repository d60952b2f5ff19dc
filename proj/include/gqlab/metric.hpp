#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gqlab/family.hpp"
#include "gqlab/grid.hpp"

namespace gqlab {

// Sampled Riemannian metric g_J on the model torus, one symmetric 2n x 2n
// matrix per grid site in the (theta-block, x-block) coordinate frame.
// Inverses are cached because assembly and curvature both need them.
struct MetricField {
  Grid grid;
  double s = 1.0;
  std::vector<Eigen::MatrixXd> g;
  std::vector<Eigen::MatrixXd> g_inv;

  const Eigen::MatrixXd& at(std::int64_t site) const { return g[site]; }
  const Eigen::MatrixXd& inv_at(std::int64_t site) const {
    return g_inv[site];
  }
};

// g_A = (Q + P Q^{-1} P) dtheta^2 - 2 P Q^{-1} dtheta dx + Q^{-1} dx^2 for
// A = P + iQ symmetric with Q > 0. Unit determinant by construction.
// Throws invalid-structure naming the defect when A is not admissible;
// `where` is prepended to the message (e.g. a site id).
Eigen::MatrixXd metric_from_A(const Eigen::MatrixXcd& A,
                              const std::string& where = {});

struct SampledStructure {
  Grid grid;
  double s = 1.0;
  std::vector<Eigen::MatrixXcd> A;
};

// Samples A(s,.) on the grid, validating the type invariants at every site.
SampledStructure sample_family(const ComplexStructureFamily& fam, double s,
                               const Grid& grid);

// Samples the family and builds the metric field via metric_from_A.
MetricField family_at(const ComplexStructureFamily& fam, double s,
                      const Grid& grid);

// Max over sites and index triples of the integrability defect
//   dA_jk/dtheta^i - dA_ik/dtheta^j + A_il dA_jk/dx_l - A_jl dA_ik/dx_l,
// centered second-order differences with periodic wraparound.
double integrability_residual(const ComplexStructureFamily& fam, double s,
                              const Grid& grid);

struct SemiflatnessReport {
  bool is_semiflat = false;
  double deviation = 0.0;  // max |Im A0 - theta-average of Im A0|
};

SemiflatnessReport semiflatness_check(const ComplexStructureFamily& fam,
                                      const Grid& grid, double tol = 1e-10);

}  // namespace gqlab
