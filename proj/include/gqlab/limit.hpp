#pragma once

#include <cstdint>
#include <vector>

namespace gqlab {

// Exact binomial C(a, b) in integer arithmetic.
std::uint64_t binom(int a, int b);

struct LimitLevel {
  int N = 0;
  double eigenvalue = 0.0;  // k*N, half-Laplacian convention
  std::uint64_t multiplicity = 0;
  std::uint64_t cumulative = 0;
};

// Spectrum of the limit operator (1/2) Delta^k on the Gaussian space, one
// copy per Bohr-Sommerfeld point: eigenvalue k*N with multiplicity
// bs_count * C(N+n-1, n-1).
struct LimitSpectrum {
  int k = 1;
  int n = 1;
  std::uint64_t bs_count = 1;
  std::vector<LimitLevel> levels;
};

LimitSpectrum gaussian_spectrum(int k, int n, std::uint64_t bs_count,
                                int N_max);

// The unique N >= 0 with bs_count*C(N-1+n, n) < j <= bs_count*C(N+n, n)
// (left side read as 0 for N = 0): the limit level of the j-th eigenvalue.
int level_index_N(std::int64_t j, int n, std::uint64_t bs_count);

struct FiberBound {
  double value = 0.0;
  std::vector<long long> minimizer;
};

// lambda(k,b) = min over integer vectors m of sum_i (m_i + k b_i)^2,
// exact by per-coordinate enumeration.
FiberBound lambda_k_b(int k, const std::vector<double>& b);

// Exact minimum of lambda(k, b) over the box [lo_i, hi_i]^n.
double lambda_k_b_box_min(int k, const std::vector<double>& lo,
                          const std::vector<double>& hi);

// Dense 1D polynomial, coefficients by ascending degree.
struct Poly1 {
  std::vector<double> c;
  int degree() const { return static_cast<int>(c.size()) - 1; }
  double eval(double y) const;
};

// p_m with p_0 = 1, p_{m+1} = p_m' - (2j) y p_m, so that
// (d/dy)^m e^{-j y^2} = p_m(y) e^{-j y^2}. Degree m, leading coeff (-2j)^m.
Poly1 hermite_profile(int j, int m);

// Limit-space eigenfunction data for the rho_j sector, j = k*l: the
// polynomial profile phi_N (tensor product of hermite_profile factors) whose
// Gaussian dressing phi_N e^{-j|y|^2/2} is the reduced eigenfunction.
struct LimitEigenfunction {
  int k = 1, l = 1, j = 1;
  std::vector<int> N;
  std::vector<Poly1> factors;
};

LimitEigenfunction limit_eigenfunction(int k, int l,
                                       const std::vector<int>& N);

// Applies sum_i(-d^2/dy_i^2 + 2k y_i d/dy_i) to every tensor-product
// eigenfunction with |N| <= d_max in exact coefficient arithmetic and checks
// the eigenvalue 2k|N| coefficient-wise. Returns the max relative coefficient
// residual (zero up to rounding).
double verify_hermite_eigen(int k, int n, int d_max);

// Samples f = phi_N(y) e^{-j|y|^2/2} on [-R, R]^n, applies the reduced
// operator -sum d^2 + j^2(1+|y|^2) - j^2 by centered differences and reports
// the max interior residual against the eigenvalue j n + 2j|N|, normalized
// by |eigenvalue| * max|f|. R <= 0 selects the default 6/sqrt(j); grid_pts
// <= 0 selects 512 per axis for n <= 2 and 96 for n = 3.
double verify_limit_metric_eigenfunction(int k, int l,
                                         const std::vector<int>& N,
                                         double R = 0.0, int grid_pts = 0);

}  // namespace gqlab
