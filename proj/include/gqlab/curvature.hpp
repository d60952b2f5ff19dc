#pragma once

#include <string>
#include <vector>

#include "gqlab/family.hpp"
#include "gqlab/metric.hpp"

namespace gqlab {

// Finite-difference Ricci diagnostics of g_{J_s} plus the circle-bundle
// components derived from the base Ricci:
//   hatRic(base_j, base_k) = Ric_jk - g_jk/2
//   hatRic(base_j, fiber)  = 0
//   hatRic(fiber, fiber)   = n/2
// kappa_rel_min is the best kappa with Ric >= kappa g over the grid;
// kappa_hat = kappa_rel_min / s is the family-normalized diagnostic that
// stays s-independent exactly when the degeneration is Ricci-bounded.
struct CurvatureReport {
  Grid grid;
  double s = 1.0;
  std::vector<Eigen::MatrixXd> ricci;
  std::vector<Eigen::MatrixXd> ricci_hat_base;
  double kappa_rel_min = 0.0;
  double kappa_hat = 0.0;
  double max_ricci_asymmetry = 0.0;
  double fstarf_defect = 0.0;      // max site |F*F - g| (identity for the
                                   // prequantum curvature F = -i pi* omega)
  double ric_hat_mixed = 0.0;      // exactly 0 by construction
  double ric_hat_fiber = 0.0;      // exactly n/2 by construction
};

// Christoffel symbols and Ricci by 4th-order centered differences with
// periodic wraparound. Requires >= 16 points per axis.
CurvatureReport ricci_field(const MetricField& metric);

struct RicciBoundProbe {
  std::vector<double> s_values;
  std::vector<double> kappa_hat;
  bool bounded = false;
  std::string warning;
};

// kappa_hat(s) table over a decreasing s list; verdict "bounded" when the
// later values do not fall below the first one beyond a tolerance band.
RicciBoundProbe semiflat_ricci_bound_probe(const ComplexStructureFamily& fam,
                                           const std::vector<double>& s_list,
                                           const Grid& grid);

}  // namespace gqlab
