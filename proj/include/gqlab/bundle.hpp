#pragma once

#include <complex>
#include <vector>

#include "gqlab/grid.hpp"

namespace gqlab {

// Prequantum line bundle data over the model torus. The connection normal
// form is d - i(x_i + a_i/2pi) dtheta^i, so the holonomy along the i-th
// fiber generator at the coordinate origin is e^{i a_i}.
struct PrequantumBundle {
  int n = 1;
  int k = 1;
  std::vector<double> holonomy_offsets;  // a_i, stored mod 2pi

  PrequantumBundle() : holonomy_offsets(1, 0.0) {}
  PrequantumBundle(int n_, int k_, std::vector<double> offsets = {});
};

struct BSPoint {
  std::vector<double> b;  // in [0,1)^n
  int strict_level = 1;
};

struct BSPointSet {
  int k = 1;
  std::vector<BSPoint> points;
};

// All Bohr-Sommerfeld points of level k: b_i = -a_i/2pi mod (1/k)Z,
// canonicalized to [0,1)^n with 1e-12 snapping; count is k^n.
BSPointSet bs_points(const PrequantumBundle& bundle);

// Holonomy phases of (L^k, nabla_k) along the n fiber generators over b:
// phase_i = exp(-i k (2pi b_i + a_i)). All phases are 1 iff b is in B_k.
std::vector<std::complex<double>> fiber_holonomy(const PrequantumBundle& bundle,
                                                 const std::vector<double>& b);

}  // namespace gqlab
