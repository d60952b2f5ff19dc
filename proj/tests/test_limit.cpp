#include <doctest.h>

#include <cmath>
#include <random>

#include "gqlab/errors.hpp"
#include "gqlab/limit.hpp"

using namespace gqlab;

namespace {

// Brute-force oracle for lambda(k,b) over a wide integer window.
double lambda_brute(int k, const std::vector<double>& b) {
  double total = 0.0;
  for (double bi : b) {
    double best = 1e300;
    for (int m = -6; m <= 6; ++m)
      best = std::min(best, (m + k * bi) * (m + k * bi));
    total += best;
  }
  return total;
}

}  // namespace

TEST_CASE("gaussian_spectrum tables") {
  SUBCASE("k=1, n=1, bs=1: eigenvalues N with unit multiplicity") {
    LimitSpectrum sp = gaussian_spectrum(1, 1, 1, 4);
    for (int N = 0; N <= 4; ++N) {
      CHECK(sp.levels[N].eigenvalue == doctest::Approx(N));
      CHECK(sp.levels[N].multiplicity == 1);
      CHECK(sp.levels[N].cumulative == static_cast<std::uint64_t>(N + 1));
    }
  }
  SUBCASE("k=2, n=2, bs=4: level N=1 has eigenvalue 2, multiplicity 8") {
    LimitSpectrum sp = gaussian_spectrum(2, 2, 4, 2);
    CHECK(sp.levels[1].eigenvalue == doctest::Approx(2.0));
    CHECK(sp.levels[1].multiplicity == 8);
  }
  SUBCASE("N=0 always carries multiplicity bs_count") {
    for (int n : {1, 2, 3})
      CHECK(gaussian_spectrum(3, n, 7, 0).levels[0].multiplicity == 7);
  }
}

TEST_CASE("level_index_N from the bracketing inequality") {
  SUBCASE("n=1, bs=2") {
    CHECK(level_index_N(1, 1, 2) == 0);
    CHECK(level_index_N(2, 1, 2) == 0);
    CHECK(level_index_N(3, 1, 2) == 1);
    CHECK(level_index_N(4, 1, 2) == 1);
  }
  SUBCASE("j=1 maps to 0 for any n, bs") {
    for (int n : {1, 2, 3})
      for (std::uint64_t bs : {1ull, 5ull}) CHECK(level_index_N(1, n, bs) == 0);
  }
  SUBCASE("n=2, bs=1: j=2 -> 1") { CHECK(level_index_N(2, 2, 1) == 1); }
}

TEST_CASE("lambda(k,b) exact minimization") {
  SUBCASE("k=2, b=0.5 is a BS point") {
    FiberBound f = lambda_k_b(2, {0.5});
    CHECK(f.value == doctest::Approx(0.0));
    CHECK(f.minimizer[0] == -1);
  }
  SUBCASE("k=2, b=0.3") {
    FiberBound f = lambda_k_b(2, {0.3});
    CHECK(f.value == doctest::Approx(0.16));
    CHECK(f.minimizer[0] == -1);
  }
  SUBCASE("n=2, k=1, b=(0.4, 0.5): coordinate-wise minimum") {
    // Brute force gives 0.4^2 (m=0 or -1 closest to -0.4) plus 0.5^2.
    FiberBound f = lambda_k_b(1, {0.4, 0.5});
    CHECK(f.value == doctest::Approx(lambda_brute(1, {0.4, 0.5})));
    CHECK(f.value == doctest::Approx(0.16 + 0.25));
  }
  SUBCASE("agrees with the brute-force oracle on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      int k = 1 + static_cast<int>(rng() % 3);
      std::vector<double> b = {ud(rng), ud(rng)};
      CHECK(lambda_k_b(k, b).value ==
            doctest::Approx(lambda_brute(k, b)).epsilon(1e-13));
    }
  }
}

TEST_CASE("lambda box minimization is exact") {
  // Over [0.2, 0.3] at k=2 the minimum is at the endpoints: 0.16.
  CHECK(lambda_k_b_box_min(2, {0.2}, {0.3}) == doctest::Approx(0.16));
  // A box containing a BS point reaches zero.
  CHECK(lambda_k_b_box_min(2, {0.4}, {0.6}) == doctest::Approx(0.0));
  // Degenerate box reduces to the point value.
  CHECK(lambda_k_b_box_min(2, {0.3}, {0.3}) ==
        doctest::Approx(lambda_k_b(2, {0.3}).value));
}

TEST_CASE("hermite profiles and the Gaussian-space eigenproblem") {
  SUBCASE("leading coefficient is (-2j)^m") {
    for (int j : {1, 2, 3})
      for (int m : {0, 1, 2, 5}) {
        Poly1 p = hermite_profile(j, m);
        CHECK(p.degree() == m);
        CHECK(p.c.back() == doctest::Approx(std::pow(-2.0 * j, m)));
      }
  }
  SUBCASE("m=2 profile is 4k^2 y^2 - 2k, proportional to y^2 - 1/(2k)") {
    Poly1 p = hermite_profile(2, 2);
    CHECK(p.c[0] == doctest::Approx(-4.0));
    CHECK(p.c[1] == doctest::Approx(0.0));
    CHECK(p.c[2] == doctest::Approx(16.0));
  }
  SUBCASE("coefficient-exact eigen check vanishes") {
    for (int k : {1, 2, 3}) {
      CHECK(verify_hermite_eigen(k, 1, 6) <= 1e-13);
      CHECK(verify_hermite_eigen(k, 2, 6) <= 1e-13);
    }
  }
}

TEST_CASE("limit-metric eigenfunction finite-difference residuals") {
  SUBCASE("ground state k=1, l=1: eigenvalue n") {
    CHECK(verify_limit_metric_eigenfunction(1, 1, {0}) <= 1e-3);
  }
  SUBCASE("k=2, l=1, N=(1): eigenvalue 6") {
    CHECK(verify_limit_metric_eigenfunction(2, 1, {1}) <= 1e-3);
  }
  SUBCASE("n=2 excited state") {
    CHECK(verify_limit_metric_eigenfunction(2, 1, {1, 1}) <= 1e-3);
  }
  SUBCASE("too-small box raises a truncation error") {
    try {
      verify_limit_metric_eigenfunction(1, 1, {0}, 1.5);
      FAIL("expected truncation error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::truncation);
    }
  }
}

TEST_CASE("binomials are exact") {
  CHECK(binom(0, 0) == 1);
  CHECK(binom(24, 4) == 10626);
  CHECK(binom(5, 7) == 0);
}
