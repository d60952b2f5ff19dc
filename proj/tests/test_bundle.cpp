#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gqlab/bundle.hpp"
#include "gqlab/errors.hpp"

using namespace gqlab;

TEST_CASE("bs_points enumerates (1/k)Z in [0,1)") {
  SUBCASE("n=1, k=3, a=0") {
    auto set = bs_points(PrequantumBundle(1, 3));
    REQUIRE(set.points.size() == 3);
    std::vector<std::pair<double, int>> got;
    for (const auto& p : set.points) got.push_back({p.b[0], p.strict_level});
    std::sort(got.begin(), got.end());
    CHECK(got[0].first == doctest::Approx(0.0));
    CHECK(got[0].second == 1);
    CHECK(got[1].first == doctest::Approx(1.0 / 3));
    CHECK(got[1].second == 3);
    CHECK(got[2].first == doctest::Approx(2.0 / 3));
    CHECK(got[2].second == 3);
  }
  SUBCASE("n=1, k=1") {
    auto set = bs_points(PrequantumBundle(1, 1));
    REQUIRE(set.points.size() == 1);
    CHECK(set.points[0].b[0] == doctest::Approx(0.0));
    CHECK(set.points[0].strict_level == 1);
  }
  SUBCASE("n=2, k=2: four points with strict levels {1,2,2,2}") {
    auto set = bs_points(PrequantumBundle(2, 2));
    REQUIRE(set.points.size() == 4);
    int strict1 = 0, strict2 = 0;
    for (const auto& p : set.points) {
      for (double b : p.b)
        CHECK((b == doctest::Approx(0.0) || b == doctest::Approx(0.5)));
      if (p.strict_level == 1) ++strict1;
      if (p.strict_level == 2) ++strict2;
    }
    CHECK(strict1 == 1);
    CHECK(strict2 == 3);
  }
}

TEST_CASE("fiber holonomy phases") {
  SUBCASE("k=2, b=1/2: phase 1 (BS point)") {
    auto ph = fiber_holonomy(PrequantumBundle(1, 2), {0.5});
    CHECK(std::abs(ph[0] - std::complex<double>(1, 0)) < 1e-14);
  }
  SUBCASE("k=2, b=1/4: phase -1") {
    auto ph = fiber_holonomy(PrequantumBundle(1, 2), {0.25});
    CHECK(std::abs(ph[0] - std::complex<double>(-1, 0)) < 1e-14);
  }
  SUBCASE("k=1, b=0: phase 1") {
    auto ph = fiber_holonomy(PrequantumBundle(1, 1), {0.0});
    CHECK(std::abs(ph[0] - std::complex<double>(1, 0)) < 1e-14);
  }
}

TEST_CASE("holonomy offsets shift the BS lattice") {
  double a = 1.3;
  auto set = bs_points(PrequantumBundle(1, 2, {a}));
  REQUIRE(set.points.size() == 2);
  for (const auto& p : set.points) {
    double v = 2.0 * (p.b[0] + a / kTwoPi);
    CHECK(std::abs(v - std::round(v)) < 1e-9);
    auto ph = fiber_holonomy(PrequantumBundle(1, 2, {a}), p.b);
    CHECK(std::abs(ph[0] - std::complex<double>(1, 0)) < 1e-9);
  }
}

TEST_CASE("bundle validation") {
  CHECK_THROWS_AS(PrequantumBundle(1, -1), Error);
  CHECK_THROWS_AS(PrequantumBundle(0, 1), Error);
  CHECK_THROWS_AS(bs_points(PrequantumBundle(1, 0)), Error);
}
