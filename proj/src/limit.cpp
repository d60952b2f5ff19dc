#include "gqlab/limit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gqlab/errors.hpp"

namespace gqlab {

std::uint64_t binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  std::uint64_t r = 1;
  for (int i = 1; i <= b; ++i) {
    r = r * static_cast<std::uint64_t>(a - b + i);
    r /= static_cast<std::uint64_t>(i);
  }
  return r;
}

LimitSpectrum gaussian_spectrum(int k, int n, std::uint64_t bs_count,
                                int N_max) {
  if (k < 1 || n < 1 || bs_count < 1 || N_max < 0)
    fail(ErrorKind::config, "gaussian_spectrum: arguments must be positive");
  LimitSpectrum sp;
  sp.k = k;
  sp.n = n;
  sp.bs_count = bs_count;
  std::uint64_t cum = 0;
  for (int N = 0; N <= N_max; ++N) {
    LimitLevel lv;
    lv.N = N;
    lv.eigenvalue = static_cast<double>(k) * N;
    lv.multiplicity = bs_count * binom(N + n - 1, n - 1);
    cum += lv.multiplicity;
    lv.cumulative = cum;
    sp.levels.push_back(lv);
  }
  return sp;
}

int level_index_N(std::int64_t j, int n, std::uint64_t bs_count) {
  if (j < 1) fail(ErrorKind::config, "level_index_N: j must be >= 1");
  std::uint64_t uj = static_cast<std::uint64_t>(j);
  for (int N = 0;; ++N) {
    std::uint64_t lo = (N == 0) ? 0 : bs_count * binom(N - 1 + n, n);
    std::uint64_t hi = bs_count * binom(N + n, n);
    if (lo < uj && uj <= hi) return N;
    if (hi > (std::uint64_t(1) << 62))
      fail(ErrorKind::internal, "level_index_N: overflow");
  }
}

FiberBound lambda_k_b(int k, const std::vector<double>& b) {
  FiberBound out;
  out.minimizer.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    double kb = k * b[i];
    long long lo = static_cast<long long>(std::floor(-kb)) - 1;
    long long hi = static_cast<long long>(std::ceil(-kb)) + 1;
    double best = std::numeric_limits<double>::infinity();
    long long best_m = lo;
    for (long long m = lo; m <= hi; ++m) {
      double v = (m + kb) * (m + kb);
      if (v < best) {
        best = v;
        best_m = m;
      }
    }
    out.value += best;
    out.minimizer[i] = best_m;
  }
  return out;
}

double lambda_k_b_box_min(int k, const std::vector<double>& lo,
                          const std::vector<double>& hi) {
  if (lo.size() != hi.size())
    fail(ErrorKind::config, "lambda box: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) fail(ErrorKind::config, "lambda box: empty interval");
    double a = k * lo[i], c = k * hi[i];
    long long mlo = static_cast<long long>(std::floor(-c)) - 1;
    long long mhi = static_cast<long long>(std::ceil(-a)) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (long long m = mlo; m <= mhi; ++m) {
      double v;
      if (-static_cast<double>(m) >= a && -static_cast<double>(m) <= c)
        v = 0.0;  // vertex of the parabola lies inside the interval
      else
        v = std::min((m + a) * (m + a), (m + c) * (m + c));
      best = std::min(best, v);
    }
    total += best;
  }
  return total;
}

double Poly1::eval(double y) const {
  double acc = 0.0;
  for (int i = degree(); i >= 0; --i) acc = acc * y + c[i];
  return acc;
}

Poly1 hermite_profile(int j, int m) {
  Poly1 p;
  p.c = {1.0};
  for (int step = 0; step < m; ++step) {
    Poly1 next;
    next.c.assign(p.c.size() + 1, 0.0);
    for (std::size_t i = 1; i < p.c.size(); ++i)
      next.c[i - 1] += p.c[i] * static_cast<double>(i);  // derivative
    for (std::size_t i = 0; i < p.c.size(); ++i)
      next.c[i + 1] -= 2.0 * j * p.c[i];  // -2j y p
    p = std::move(next);
  }
  return p;
}

LimitEigenfunction limit_eigenfunction(int k, int l,
                                       const std::vector<int>& N) {
  if (k < 1 || l < 1) fail(ErrorKind::config, "limit eigenfunction: k,l >= 1");
  LimitEigenfunction f;
  f.k = k;
  f.l = l;
  f.j = k * l;
  f.N = N;
  for (int Ni : N) f.factors.push_back(hermite_profile(f.j, Ni));
  return f;
}

namespace {

// Dense multivariate polynomial on a fixed per-axis degree budget.
struct PolyN {
  int n;
  int stride;  // max degree + 1 per axis
  std::vector<double> c;

  PolyN(int n_, int stride_) : n(n_), stride(stride_) {
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= stride;
    c.assign(total, 0.0);
  }
  std::size_t index(const std::vector<int>& deg) const {
    std::size_t idx = 0;
    for (int i = n - 1; i >= 0; --i) idx = idx * stride + deg[i];
    return idx;
  }
};

// Applies sum_i (-d_i^2 + 2k y_i d_i) in coefficient arithmetic.
PolyN apply_gaussian_laplacian(const PolyN& p, int k) {
  PolyN out(p.n, p.stride);
  std::vector<int> deg(p.n, 0);
  for (std::size_t idx = 0; idx < p.c.size(); ++idx) {
    double v = p.c[idx];
    if (v != 0.0) {
      for (int i = 0; i < p.n; ++i) {
        int d = deg[i];
        // -d^2/dy_i^2: coefficient flows from degree d to d-2.
        if (d >= 2) {
          std::vector<int> q = deg;
          q[i] = d - 2;
          out.c[out.index(q)] -= v * d * (d - 1);
        }
        // 2k y_i d/dy_i maps y^d to 2k d y^d.
        out.c[idx] += 2.0 * k * d * v;
      }
    }
    int ax = 0;
    while (ax < p.n && ++deg[ax] == p.stride) deg[ax++] = 0;
  }
  return out;
}

}  // namespace

double verify_hermite_eigen(int k, int n, int d_max) {
  if (k < 1 || n < 1 || d_max < 0)
    fail(ErrorKind::config, "verify_hermite_eigen: bad arguments");

  double worst = 0.0;
  // Enumerate multi-indices N with |N| <= d_max.
  std::vector<int> N(n, 0);
  while (true) {
    int d = std::accumulate(N.begin(), N.end(), 0);
    if (d <= d_max) {
      PolyN phi(n, d_max + 1);
      {
        std::vector<Poly1> fac;
        for (int Ni : N) fac.push_back(hermite_profile(k, Ni));
        std::vector<int> deg(n, 0);
        for (std::size_t idx = 0; idx < phi.c.size(); ++idx) {
          double v = 1.0;
          for (int i = 0; i < n; ++i)
            v *= (deg[i] < static_cast<int>(fac[i].c.size()))
                     ? fac[i].c[deg[i]]
                     : 0.0;
          phi.c[idx] = v;
          int ax = 0;
          while (ax < n && ++deg[ax] == phi.stride) deg[ax++] = 0;
        }
      }
      PolyN lhs = apply_gaussian_laplacian(phi, k);
      double scale = 0.0;
      for (double v : phi.c) scale = std::max(scale, std::abs(v));
      double resid = 0.0;
      for (std::size_t i = 0; i < phi.c.size(); ++i)
        resid = std::max(resid,
                         std::abs(lhs.c[i] - 2.0 * k * d * phi.c[i]));
      worst = std::max(worst, resid / std::max(scale, 1.0));
    }
    int ax = 0;
    while (ax < n && ++N[ax] > d_max) N[ax++] = 0;
    if (ax == n) break;
  }
  return worst;
}

double verify_limit_metric_eigenfunction(int k, int l,
                                         const std::vector<int>& N, double R,
                                         int grid_pts) {
  const int n = static_cast<int>(N.size());
  if (n < 1 || n > 3)
    fail(ErrorKind::config, "limit metric check supports n in [1,3]");
  if (k < 1 || l < 1) fail(ErrorKind::config, "limit metric check: k,l >= 1");
  const int j = k * l;
  if (R <= 0.0) R = 6.0 / std::sqrt(static_cast<double>(j));
  const int G = grid_pts > 0 ? grid_pts : (n <= 2 ? 512 : 96);
  const int g_min = n == 1 ? 128 : 64;
  if (G < g_min)
    fail(ErrorKind::resolution, "limit metric check: grid >= " +
                                    std::to_string(g_min) + " per axis");
  const double h = 2.0 * R / (G - 1);

  LimitEigenfunction fn = limit_eigenfunction(k, l, N);
  int d = std::accumulate(N.begin(), N.end(), 0);
  const double eigenvalue = static_cast<double>(j) * n + 2.0 * j * d;

  // Sample f on the box.
  std::vector<double> axis(G);
  for (int i = 0; i < G; ++i) axis[i] = -R + i * h;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= G;
  std::vector<double> f(total);
  std::vector<int> idx(n, 0);
  double fmax = 0.0, fboundary = 0.0;
  for (std::size_t p = 0; p < total; ++p) {
    double val = 1.0, r2 = 0.0;
    bool on_boundary = false;
    for (int i = 0; i < n; ++i) {
      double y = axis[idx[i]];
      val *= fn.factors[i].eval(y);
      r2 += y * y;
      if (idx[i] == 0 || idx[i] == G - 1) on_boundary = true;
    }
    val *= std::exp(-0.5 * j * r2);
    f[p] = val;
    fmax = std::max(fmax, std::abs(val));
    if (on_boundary) fboundary = std::max(fboundary, std::abs(val));
    int ax = 0;
    while (ax < n && ++idx[ax] == G) idx[ax++] = 0;
  }
  if (fboundary > 1e-6 * fmax)
    fail(ErrorKind::truncation,
         "limit metric check: box too small (boundary/interior ratio " +
             std::to_string(fboundary / fmax) + ")");

  // Reduced operator -sum d^2 + j^2 |y|^2 by centered differences.
  std::vector<std::size_t> stride(n, 1);
  for (int i = 1; i < n; ++i) stride[i] = stride[i - 1] * G;
  double worst = 0.0;
  std::fill(idx.begin(), idx.end(), 0);
  for (std::size_t p = 0; p < total; ++p) {
    bool interior = true;
    for (int i = 0; i < n; ++i)
      if (idx[i] == 0 || idx[i] == G - 1) interior = false;
    if (interior) {
      double r2 = 0.0;
      double lap = 0.0;
      for (int i = 0; i < n; ++i) {
        double y = axis[idx[i]];
        r2 += y * y;
        lap -= (f[p + stride[i]] - 2.0 * f[p] + f[p - stride[i]]) / (h * h);
      }
      double resid =
          lap + static_cast<double>(j) * j * r2 * f[p] - eigenvalue * f[p];
      worst = std::max(worst, std::abs(resid));
    }
    int ax = 0;
    while (ax < n && ++idx[ax] == G) idx[ax++] = 0;
  }
  return worst / (std::abs(eigenvalue) * fmax);
}

}  // namespace gqlab
