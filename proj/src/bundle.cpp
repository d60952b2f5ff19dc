#include "gqlab/bundle.hpp"

#include <cmath>
#include <numeric>

#include "gqlab/errors.hpp"

namespace gqlab {

PrequantumBundle::PrequantumBundle(int n_, int k_, std::vector<double> offsets)
    : n(n_), k(k_), holonomy_offsets(std::move(offsets)) {
  if (n < 1) fail(ErrorKind::config, "bundle: n must be >= 1");
  // k = 0 is the trivial bundle, accepted for plain-Laplacian assembly.
  if (k < 0) fail(ErrorKind::config, "bundle: level k must be >= 0");
  if (holonomy_offsets.empty()) holonomy_offsets.assign(n, 0.0);
  if (static_cast<int>(holonomy_offsets.size()) != n)
    fail(ErrorKind::config, "bundle: expected n holonomy offsets");
  for (double& a : holonomy_offsets) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
  }
}

static double wrap01(double v) {
  v -= std::floor(v);
  if (v >= 1.0) v -= 1.0;
  return v;
}

BSPointSet bs_points(const PrequantumBundle& bundle) {
  const int n = bundle.n, k = bundle.k;
  if (k < 1) fail(ErrorKind::config, "bs_points: level k must be >= 1");
  BSPointSet set;
  set.k = k;

  std::vector<int> j(n, 0);
  while (true) {
    BSPoint p;
    p.b.resize(n);
    for (int i = 0; i < n; ++i) {
      double b = wrap01(static_cast<double>(j[i]) / k -
                        bundle.holonomy_offsets[i] / kTwoPi);
      // Snap to the rational lattice (1/k)Z to kill the wrap seam.
      double snapped = std::round(b * k) / k;
      if (std::abs(b - snapped) < 1e-12) b = wrap01(snapped);
      p.b[i] = b;
    }
    // Minimal k' with k' j_i / k integral for all i: k / gcd(k, gcd_i j_i).
    int g = k;
    for (int i = 0; i < n; ++i) g = std::gcd(g, j[i]);
    p.strict_level = k / g;
    set.points.push_back(std::move(p));

    int axis = 0;
    while (axis < n && ++j[axis] == k) j[axis++] = 0;
    if (axis == n) break;
  }
  return set;
}

std::vector<std::complex<double>> fiber_holonomy(
    const PrequantumBundle& bundle, const std::vector<double>& b) {
  if (static_cast<int>(b.size()) != bundle.n)
    fail(ErrorKind::config, "fiber_holonomy: b has wrong dimension");
  std::vector<std::complex<double>> phases(bundle.n);
  for (int i = 0; i < bundle.n; ++i) {
    double arg = -bundle.k * (kTwoPi * b[i] + bundle.holonomy_offsets[i]);
    phases[i] = std::polar(1.0, arg);
  }
  return phases;
}

}  // namespace gqlab
