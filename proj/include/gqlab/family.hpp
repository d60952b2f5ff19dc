#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gqlab/grid.hpp"

namespace gqlab {

// Model symplectic torus T^{2n} with omega = dx_i ^ dtheta^i. The periods are
// fixed by convention: 1 per x coordinate, 2pi per theta coordinate.
struct TorusModel {
  int n = 1;
  static constexpr double x_period = 1.0;
  static constexpr double theta_period = kTwoPi;
};

enum class FamilyKind { linear, general };

// A one-parameter family of compatible (almost) complex structures on the
// model torus, encoded by the symmetric matrix field A(s,x,theta) = P + iQ
// with Q > 0. For linear families A(s,.) = s * A0(.) exactly.
struct ComplexStructureFamily {
  int n = 1;
  FamilyKind kind = FamilyKind::linear;
  std::string name;
  bool claims_integrable = false;
  bool claims_semiflat = false;
  bool claims_heart = false;

  // Leading term A0(x, theta).
  std::function<Eigen::MatrixXcd(const double* x, const double* theta)> leading;
  // Full evaluator; for linear families this is s * leading.
  std::function<Eigen::MatrixXcd(double s, const double* x,
                                 const double* theta)>
      eval;

  // Native grid for tabulated families (samples exist only on grid sites).
  std::optional<Grid> native_grid;

  Eigen::MatrixXcd at(double s, const double* x, const double* theta) const;
  Eigen::MatrixXcd leading_at(const double* x, const double* theta) const;
};

// Built-in presets:
//   flat         A0 = iI                      (any n)
//   semiflat     A0 = i(1 + 0.5 cos 2pi x1)   (n=1, base-dependent)
//   nonsemiflat  A0 = i(1 + 0.5 cos theta^1)  (n=1, fiber-dependent)
//   heart        A0 = 0.4 cos 2pi x1 + i(1 + 0.3 sin 2pi x1)  (n=1, P != 0)
//   potential    A0 = i(I + Hess_theta(0.3 cos theta^1 cos theta^2))  (n=2)
//   twisted      A0 = diag(i(1 + 0.3 sin theta^2), i)  (n=2, non-integrable)
ComplexStructureFamily preset_family(const std::string& name, int n);
std::vector<std::string> preset_names();

// Text format: header "n N_theta N_x", then one row per site:
// site index followed by 2*n^2 reals (Re A row-major, then Im A row-major).
// The samples define the leading term A0 of a linear family.
ComplexStructureFamily load_tabulated_family(const std::string& path);
void write_tabulated_family(const std::string& path,
                            const ComplexStructureFamily& fam,
                            const Grid& grid);

}  // namespace gqlab
