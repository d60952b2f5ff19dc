#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gqlab/errors.hpp"

namespace gqlab {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Largest half-dimension the lattice code supports (2n axes).
inline constexpr int kMaxHalfDim = 4;

using Multi = std::array<int, 2 * kMaxHalfDim>;

// Uniform tensor-product grid on T^{2n} = (R^n/2piZ^n)_theta x (R^n/Z^n)_x.
// Axes 0..n-1 are fiber angles theta^i (period 2pi, n_theta points each),
// axes n..2n-1 base actions x_i (period 1, n_x points each).
// Theta axes vary fastest in the flattened site index.
struct Grid {
  int n = 1;
  int n_theta = 64;
  int n_x = 64;

  Grid() = default;
  Grid(int n_, int n_theta_, int n_x_) : n(n_), n_theta(n_theta_), n_x(n_x_) {
    validate();
  }

  void validate() const {
    if (n < 1 || n > kMaxHalfDim)
      fail(ErrorKind::config, "grid: n must be in [1," +
                                  std::to_string(kMaxHalfDim) + "], got " +
                                  std::to_string(n));
    if (n_theta < 2 || n_x < 2)
      fail(ErrorKind::config, "grid: at least 2 points per axis required");
  }

  int axes() const { return 2 * n; }
  bool is_theta_axis(int a) const { return a < n; }
  int points(int a) const { return a < n ? n_theta : n_x; }
  double period(int a) const { return a < n ? kTwoPi : 1.0; }
  double spacing(int a) const { return period(a) / points(a); }

  std::int64_t sites() const {
    std::int64_t m = 1;
    for (int a = 0; a < axes(); ++a) m *= points(a);
    return m;
  }

  // Cell volume of the coordinate measure dtheta dx.
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < axes(); ++a) v *= spacing(a);
    return v;
  }

  Multi decode(std::int64_t idx) const {
    Multi m{};
    for (int a = 0; a < axes(); ++a) {
      int pts = points(a);
      m[a] = static_cast<int>(idx % pts);
      idx /= pts;
    }
    return m;
  }

  std::int64_t encode(const Multi& m) const {
    std::int64_t idx = 0;
    for (int a = axes() - 1; a >= 0; --a) idx = idx * points(a) + m[a];
    return idx;
  }

  // Neighbor along axis a; step is +1 or -1. wrap reports whether the move
  // crossed the periodic seam (+1 upward, -1 downward, 0 none).
  std::int64_t neighbor(const Multi& m, int a, int step, int* wrap) const {
    Multi q = m;
    int pts = points(a);
    int v = q[a] + step;
    int w = 0;
    if (v >= pts) {
      v -= pts;
      w = 1;
    } else if (v < 0) {
      v += pts;
      w = -1;
    }
    q[a] = v;
    if (wrap) *wrap = w;
    return encode(q);
  }

  double coord(const Multi& m, int a) const { return m[a] * spacing(a); }

  bool operator==(const Grid& o) const {
    return n == o.n && n_theta == o.n_theta && n_x == o.n_x;
  }

  std::string str() const {
    return "n=" + std::to_string(n) + " grid " + std::to_string(n_theta) +
           "x" + std::to_string(n_x);
  }
};

}  // namespace gqlab
