#include <cmath>

#include "doctest.h"
#include "psdo/catalog.hpp"
#include "psdo/seminorm.hpp"
#include "psdo/taylor.hpp"

using namespace psdo;

namespace {
ParameterStrip small_strip() {
  return ParameterStrip::make(0.0, M_PI, log_spaced(1.0, 100.0, 2),
                              linear_spaced(0.0, M_PI, 3));
}
}

TEST_CASE("constant symbol has unit sup") {
  auto one = constant_symbol(cplx(1.0, 0.0));
  auto v = estimate_seminorm(one, SeminormSpec::parametric(0.0), small_strip(),
                             CircleGrid::make(8));
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tau derivative of <xi,tau>^-1 is order-correct") {
  // |d_tau <xi,tau>^-1| <xi,tau>^2 = tau <xi,tau>^-1 <= 1
  auto a = param_bessel_symbol(-1.0);
  auto v = estimate_seminorm(a, SeminormSpec::parametric(-1.0, 0, 0, 1),
                             small_strip(), CircleGrid::make(8));
  CHECK(v <= 1.0 + 1e-6);
  CHECK(v > 0.5);  // sup tau/<xi,tau> approaches 1 on the grid
}

TEST_CASE("xi derivative of the arccos extension matches the closed form") {
  auto a = arccos_taylor_symbol();
  // d_xi [chi arccos(tau/r)] = (xi/|xi|) tau/(tau^2+xi^2) where chi = 1
  const double fd = 1e-3;
  (void)fd;
  int checked = 0;
  for (double xi : {1.5, 2.0, 3.0, 5.0, -2.0, -4.0, 8.0, 1.2, 6.5, 2.5}) {
    for (double tau : {1.0, 2.0}) {
      const double expect = (xi > 0 ? 1.0 : -1.0) * tau / (tau * tau + xi * xi);
      // finite difference of the evaluator, the estimator's stencil
      const double h = fd_step_xi(xi);
      auto val = [&](double z) {
        return a->value(0.0, z, tau, 0.0)(0, 0).real();
      };
      const double d =
          (val(xi - 2 * h) - 8 * val(xi - h) + 8 * val(xi + h) -
           val(xi + 2 * h)) /
          (12 * h);
      CHECK(std::abs(d - expect) < 1e-6);
      if (xi == 2.0 && tau == 1.0) CHECK(std::abs(d - 0.2) < 1e-8);
      ++checked;
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("tau-independent symbols sit at the finite-difference noise floor") {
  for (const char* id : {"bessel1", "hardy", "phase"}) {
    auto a = catalog_lookup(id);
    auto v = estimate_seminorm(a, SeminormSpec::parametric(1.0, 0, 0, 1),
                               small_strip(), CircleGrid::make(8));
    CHECK(v < 1e-6);
  }
}

TEST_CASE("grid refinement moves the sup by less than 5 percent") {
  auto a = classical_model_symbol();
  auto spec = SeminormSpec::parametric(0.0, 1, 0, 1);
  auto coarse = estimate_seminorm(a, spec, small_strip(), CircleGrid::make(8));
  auto strip2 = ParameterStrip::make(0.0, M_PI, log_spaced(1.0, 100.0, 4),
                                     linear_spaced(0.0, M_PI, 3));
  auto fine =
      estimate_seminorm(a, spec, strip2, CircleGrid::make(8, 1, 1, 40));
  CHECK(fine >= coarse - 1e-9);  // sup over a refinement can only grow
  CHECK(std::abs(fine - coarse) <= 0.05 * std::max(coarse, 1e-30));
}

TEST_CASE("mixed-weight sups for the arccos extension are finite") {
  auto a = arccos_taylor_symbol();
  for (int alpha = 0; alpha <= 2; ++alpha)
    for (int k = 0; k <= 2; ++k) {
      auto v = estimate_seminorm(a, SeminormSpec::mixed(0.0, 0.0, alpha, 0, k),
                                 small_strip(), CircleGrid::make(8));
      CHECK(std::isfinite(v));
      CHECK(v < 10.0);
    }
}

TEST_CASE("serial and parallel seminorm kernels agree exactly") {
  auto a = resolvent_reduced_perturbed_symbol(0.1);
  auto spec = SeminormSpec::parametric(0.0, 1, 1, 0);
  auto strip = small_strip();
  auto g = CircleGrid::make(6);
  const double p = estimate_seminorm(a, spec, strip, g);
  const double s = estimate_seminorm_serial(a, spec, strip, g);
  CHECK(p == s);
}

TEST_CASE("derivative orders above four are refused") {
  auto a = bessel_symbol(1.0);
  SeminormSpec bad;
  bad.alpha = 5;
  CHECK_THROWS_AS(
      estimate_seminorm(a, bad, small_strip(), CircleGrid::make(4)),
      PsdoError);
}
