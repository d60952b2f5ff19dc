#include <doctest.h>

#include <cmath>

#include "gqlab/curvature.hpp"
#include "gqlab/errors.hpp"

using namespace gqlab;

TEST_CASE("flat family: Ricci vanishes, kappa_hat is zero") {
  for (double s : {1.0, 0.3}) {
    MetricField mf = family_at(preset_family("flat", 1), s, Grid(1, 64, 64));
    CurvatureReport rep = ricci_field(mf);
    double worst = 0.0;
    for (const auto& r : rep.ricci)
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    CHECK(worst <= 1e-8);
    CHECK(std::abs(rep.kappa_hat) <= 1e-7);
    CHECK(rep.ric_hat_fiber == doctest::Approx(0.5));
    CHECK(rep.ric_hat_mixed == 0.0);
  }
}

TEST_CASE("semiflat preset: kappa_hat = -pi^2, independent of s") {
  // Exact Gauss curvature of Q dtheta^2 + dx^2/Q with Q = s(1+cos(2pi x)/2)
  // is K = pi^2 s cos(2pi x); the s-normalized relative Ricci minimum is
  // therefore -pi^2 at every s.
  const double pi2 = kTwoPi * kTwoPi / 4.0;
  for (double s : {0.2, 0.1, 0.05}) {
    MetricField mf =
        family_at(preset_family("semiflat", 1), s, Grid(1, 64, 64));
    CurvatureReport rep = ricci_field(mf);
    CHECK(rep.kappa_hat == doctest::Approx(-pi2).epsilon(0.01));
    CHECK(rep.kappa_rel_min == doctest::Approx(-pi2 * s).epsilon(0.01));
    CHECK(rep.max_ricci_asymmetry <= 1e-8);
  }
}

TEST_CASE("nonsemiflat preset: kappa_hat = -0.26824/s^2") {
  // Symbolic minimum of s*K over the circle: -0.2682459506 at
  // theta = 1.8158; kappa_hat = that value / s^2.
  for (double s : {0.2, 0.1}) {
    MetricField mf =
        family_at(preset_family("nonsemiflat", 1), s, Grid(1, 128, 16));
    CurvatureReport rep = ricci_field(mf);
    CHECK(rep.kappa_hat ==
          doctest::Approx(-0.2682459506 / (s * s)).epsilon(0.01));
  }
}

TEST_CASE("heart preset kappa_hat is s-independent (-14.9454)") {
  for (double s : {0.2, 0.05}) {
    MetricField mf = family_at(preset_family("heart", 1), s, Grid(1, 64, 64));
    CurvatureReport rep = ricci_field(mf);
    CHECK(rep.kappa_hat == doctest::Approx(-14.9454).epsilon(0.01));
  }
}

TEST_CASE("F*F recovers the metric at every site") {
  MetricField mf = family_at(preset_family("heart", 1), 0.3, Grid(1, 16, 16));
  CurvatureReport rep = ricci_field(mf);
  CHECK(rep.fstarf_defect <= 1e-12);
}

TEST_CASE("bound probe verdicts") {
  Grid grid(1, 64, 64);
  std::vector<double> s_list = {0.2, 0.1, 0.05};
  SUBCASE("flat and semiflat are bounded") {
    CHECK(semiflat_ricci_bound_probe(preset_family("flat", 1), s_list, grid)
              .bounded);
    CHECK(
        semiflat_ricci_bound_probe(preset_family("semiflat", 1), s_list, grid)
            .bounded);
  }
  SUBCASE("nonsemiflat is unbounded below") {
    auto probe = semiflat_ricci_bound_probe(preset_family("nonsemiflat", 1),
                                            s_list, grid);
    CHECK_FALSE(probe.bounded);
    CHECK(probe.kappa_hat.back() < probe.kappa_hat.front());
  }
  SUBCASE("heart carries a hypothesis warning but stays bounded") {
    auto probe =
        semiflat_ricci_bound_probe(preset_family("heart", 1), s_list, grid);
    CHECK(probe.bounded);
    CHECK(probe.warning.empty());  // heart preset is integrable for n=1
  }
}

TEST_CASE("coarse grids are rejected") {
  MetricField mf = family_at(preset_family("flat", 1), 1.0, Grid(1, 8, 8));
  try {
    ricci_field(mf);
    FAIL("expected resolution error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resolution);
  }
}
