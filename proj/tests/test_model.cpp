#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gqlab/errors.hpp"
#include "gqlab/metric.hpp"

using namespace gqlab;
using cplx = std::complex<double>;

TEST_CASE("metric_from_A: flat structure gives the identity") {
  Eigen::MatrixXcd A(1, 1);
  A(0, 0) = cplx(0, 1);
  Eigen::MatrixXd g = metric_from_A(A);
  CHECK(g.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-15));
}

TEST_CASE("metric_from_A: A = is gives s dtheta^2 + dx^2/s") {
  for (double s : {0.5, 0.25, 2.0}) {
    Eigen::MatrixXcd A(1, 1);
    A(0, 0) = cplx(0, s);
    Eigen::MatrixXd g = metric_from_A(A);
    CHECK(g(0, 0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(g(1, 1) == doctest::Approx(1.0 / s).epsilon(1e-14));
    CHECK(g(0, 1) == 0.0);
  }
}

TEST_CASE("metric_from_A: A = 1+i gives 2 dtheta^2 - 2 dtheta dx + dx^2") {
  // Substituting P = Q = 1 in the metric formula by hand:
  // g_tt = 1 + 1 = 2, g_tx = -1, g_xx = 1; det = 1.
  Eigen::MatrixXcd A(1, 1);
  A(0, 0) = cplx(1, 1);
  Eigen::MatrixXd g = metric_from_A(A);
  CHECK(g(0, 0) == doctest::Approx(2.0));
  CHECK(g(0, 1) == doctest::Approx(-1.0));
  CHECK(g(1, 0) == doctest::Approx(-1.0));
  CHECK(g(1, 1) == doctest::Approx(1.0));
  CHECK(g.determinant() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("metric_from_A rejects bad structure matrices") {
  Eigen::MatrixXcd bad(2, 2);
  bad << cplx(0, 1), cplx(0.5, 0), cplx(-0.5, 0), cplx(0, 1);
  CHECK_THROWS_AS(metric_from_A(bad), Error);

  Eigen::MatrixXcd neg(1, 1);
  neg(0, 0) = cplx(0, -1);
  try {
    metric_from_A(neg);
    FAIL("expected invalid-structure error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_structure);
    CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
  }
}

TEST_CASE("family_at samples presets with the documented values") {
  Grid grid(1, 8, 8);

  SUBCASE("flat at s=0.25 has Q = 0.25 everywhere") {
    MetricField mf = family_at(preset_family("flat", 1), 0.25, grid);
    for (const auto& g : mf.g) CHECK(g(0, 0) == doctest::Approx(0.25));
  }
  SUBCASE("semiflat at s=0.1, x=0 has Q = 0.15") {
    auto fam = preset_family("semiflat", 1);
    double x = 0.0, th = 0.3;
    CHECK(fam.at(0.1, &x, &th)(0, 0).imag() == doctest::Approx(0.15));
  }
  SUBCASE("nonsemiflat at s=0.1, theta=pi has Q = 0.05") {
    auto fam = preset_family("nonsemiflat", 1);
    double x = 0.2, th = kTwoPi / 2;
    CHECK(fam.at(0.1, &x, &th)(0, 0).imag() == doctest::Approx(0.05));
  }
  SUBCASE("s <= 0 is a domain error") {
    try {
      family_at(preset_family("flat", 1), 0.0, grid);
      FAIL("expected domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domain);
    }
  }
}

TEST_CASE("integrability residual") {
  SUBCASE("any n=1 family vanishes identically") {
    for (const char* p : {"flat", "semiflat", "nonsemiflat", "heart"})
      CHECK(integrability_residual(preset_family(p, 1), 0.5, Grid(1, 8, 8)) ==
            doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("constant n=2 structure vanishes") {
    CHECK(integrability_residual(preset_family("flat", 2), 1.0,
                                 Grid(2, 8, 8)) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("theta-twisted n=2 structure is visibly non-integrable") {
    // dA_11/dtheta^2 = 0.3 s cos(theta^2): max 0.3 at s=1 up to the
    // centered-difference sinc factor.
    double r = integrability_residual(preset_family("twisted", 2), 1.0,
                                      Grid(2, 32, 8));
    CHECK(r == doctest::Approx(0.3).epsilon(0.02));
  }
  SUBCASE("resolution precondition") {
    CHECK_THROWS_AS(integrability_residual(preset_family("flat", 1), 1.0,
                                           Grid(1, 4, 4)),
                    Error);
  }
}

TEST_CASE("semiflatness check on presets and a Re-only family") {
  Grid grid(1, 16, 16);
  CHECK(semiflatness_check(preset_family("semiflat", 1), grid).is_semiflat);
  auto rep = semiflatness_check(preset_family("nonsemiflat", 1), grid);
  CHECK_FALSE(rep.is_semiflat);
  CHECK(rep.deviation == doctest::Approx(0.5).epsilon(0.02));

  // Only Re A0 depends on theta: still semiflat.
  ComplexStructureFamily fam;
  fam.n = 1;
  fam.kind = FamilyKind::linear;
  fam.leading = [](const double*, const double* th) {
    Eigen::MatrixXcd a(1, 1);
    a(0, 0) = cplx(std::cos(th[0]), 1.0);
    return a;
  };
  CHECK(semiflatness_check(fam, grid).is_semiflat);
}

TEST_CASE("tabulated family round trip matches the preset") {
  Grid grid(1, 8, 8);
  auto fam = preset_family("semiflat", 1);
  std::string path =
      (std::filesystem::temp_directory_path() / "gqlab_fam.txt").string();
  write_tabulated_family(path, fam, grid);
  ComplexStructureFamily loaded = load_tabulated_family(path);
  REQUIRE(loaded.native_grid.has_value());
  CHECK(*loaded.native_grid == grid);
  MetricField a = family_at(fam, 0.2, grid);
  MetricField b = family_at(loaded, 0.2, grid);
  for (std::int64_t p = 0; p < grid.sites(); ++p)
    CHECK((a.g[p] - b.g[p]).cwiseAbs().maxCoeff() <= 1e-14);
  // Grid mismatch is a config error.
  CHECK_THROWS_AS(family_at(loaded, 0.2, Grid(1, 16, 16)), Error);
  std::remove(path.c_str());
}

TEST_CASE("tabulated loader rejects malformed files") {
  auto tmp = std::filesystem::temp_directory_path();
  {
    std::ofstream bad((tmp / "gqlab_bad1.txt").string());
    bad << "not numbers\n";
  }
  CHECK_THROWS_AS(load_tabulated_family((tmp / "gqlab_bad1.txt").string()),
                  Error);
  {
    // Valid header but a duplicate site index.
    std::ofstream bad((tmp / "gqlab_bad2.txt").string());
    bad << "1 4 4\n";
    for (int i = 0; i < 16; ++i) bad << 0 << " 0 1\n";
  }
  try {
    load_tabulated_family((tmp / "gqlab_bad2.txt").string());
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
  std::remove((tmp / "gqlab_bad1.txt").string().c_str());
  std::remove((tmp / "gqlab_bad2.txt").string().c_str());
}
