#include <cmath>

#include "doctest.h"
#include "psdo/grid.hpp"

using namespace psdo;

TEST_CASE("lambda sampling is the lexicographic product") {
  auto s = ParameterStrip::make(0.0, M_PI, {1.0}, {M_PI});
  auto l = sample_lambda(s);
  REQUIRE(l.size() == 1);
  CHECK(l[0].tau == 1.0);
  CHECK(l[0].theta == M_PI);

  auto s2 = ParameterStrip::make(0.0, M_PI, {1.0, 10.0}, {M_PI / 2, M_PI});
  auto l2 = sample_lambda(s2);
  REQUIRE(l2.size() == 4);
  CHECK(l2[0].tau == 1.0);
  CHECK(l2[0].theta == M_PI / 2);
  CHECK(l2[1].tau == 1.0);
  CHECK(l2[1].theta == M_PI);
  CHECK(l2[2].tau == 10.0);
  CHECK(l2[3].theta == M_PI);
}

TEST_CASE("log grid: 1..10^3 at 4 per decade gives 13 samples") {
  auto taus = log_spaced(1.0, 1e3, 4);
  CHECK(taus.size() == 13);
  CHECK(taus.front() == 1.0);
  CHECK(taus.back() == 1e3);
  for (size_t i = 1; i < taus.size(); ++i) CHECK(taus[i] > taus[i - 1]);
}

TEST_CASE("strip invariants are enforced") {
  CHECK_THROWS_AS(ParameterStrip::make(1.0, 0.5, {1.0}, {0.7}), PsdoError);
  CHECK_THROWS_AS(ParameterStrip::make(0.0, 7.0, {1.0}, {1.0}), PsdoError);
  CHECK_THROWS_AS(ParameterStrip::make(0.0, 1.0, {2.0, 1.0}, {0.5}),
                  PsdoError);
  CHECK_THROWS_AS(ParameterStrip::make(0.0, 1.0, {}, {0.5}), PsdoError);
  CHECK_THROWS_AS(ParameterStrip::make(0.0, 1.0, {1.0}, {2.0}), PsdoError);
}

TEST_CASE("circle grid needs n_x >= 2K+2") {
  auto g = CircleGrid::make(8);
  CHECK(g.n_x == 18);
  CHECK(g.x_points().size() == 18);
  CHECK(g.xi_points().front() == -8.0);
  CHECK(g.xi_points().back() == 8.0);
  CHECK_THROWS_AS(CircleGrid::make(8, 1, 1, 10), PsdoError);
  CHECK_THROWS_AS(CircleGrid::make(0), PsdoError);
}

TEST_CASE("seminorm spec rejects high derivative orders") {
  CHECK_THROWS_AS(SeminormSpec::parametric(0.0, 5, 0, 0), PsdoError);
  CHECK_NOTHROW(SeminormSpec::parametric(0.0, 4, 0, 0));
  SeminormSpec bad;
  bad.alpha = -1;
  CHECK_THROWS_AS(bad.validate(), PsdoError);
}
