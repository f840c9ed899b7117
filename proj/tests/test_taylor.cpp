#include <cmath>

#include "doctest.h"
#include "psdo/calculus.hpp"
#include "psdo/catalog.hpp"
#include "psdo/taylor.hpp"

using namespace psdo;

TEST_CASE("smooth polar data: leading coefficient is the pole value") {
  // cos(rho) e^{i theta}: smooth through the pole, a0 = e^{i theta}
  PolarFn f = [](const PolarPoint& q, JetSpec s) {
    Jet rho = Jet::variable(s, q.x.size(), q.rho, 0);
    return JetMat::from_scalar(rho.cos().scaled(std::exp(cplx(0.0, q.theta))));
  };
  TaylorVerification v;
  v.thetas = {0.0, 1.3};
  auto t = taylor_expand_northpole(f, 1, 1, 2, v);
  for (double th : {0.0, 1.3}) {
    for (int phi : {1, -1}) {
      cplx a0 = t.coefficients[0](0.0, phi, th)(0, 0);
      CHECK(std::abs(a0 - std::exp(cplx(0.0, th))) < 1e-9);
    }
  }
}

TEST_CASE("reduced-resolvent polar data: coefficients e^it, -1, -e^it/2") {
  TaylorVerification v;
  v.thetas = {0.7};
  auto t = taylor_expand_northpole(reduced_resolvent_polar(), 1, 1, 2, v);
  const double th = 0.7;
  const cplx eit = std::exp(cplx(0.0, th));
  CHECK(std::abs(t.coefficients[0](0.0, 1, th)(0, 0) - eit) < 1e-6);
  CHECK(std::abs(t.coefficients[1](0.0, 1, th)(0, 0) - cplx(-1.0, 0.0)) <
        1e-6);
  CHECK(std::abs(t.coefficients[2](0.0, 1, th)(0, 0) + eit * 0.5) < 1e-6);
  // remainder slopes certify ell+1 up to the fit tolerance
  auto slopes = taylor_remainder_slopes(reduced_resolvent_polar(), t, 2, v);
  for (int ell = 0; ell <= 2; ++ell)
    CHECK(slopes[size_t(ell)] >= double(ell) + 1.0 - 0.1);
}

TEST_CASE("rho itself: a0 = 0, a1 = 1, rest zero") {
  auto t = taylor_expand_northpole(rho_polar(), 1, 1, 3);
  CHECK(std::abs(t.coefficients[0](0.0, 1, 0.0)(0, 0)) < 1e-10);
  CHECK(std::abs(t.coefficients[1](0.0, -1, 0.0)(0, 0) - cplx(1.0, 0.0)) <
        1e-9);
  CHECK(std::abs(t.coefficients[2](0.0, 1, 0.0)(0, 0)) < 1e-7);
  CHECK(std::abs(t.coefficients[3](0.0, 1, 0.0)(0, 0)) < 1e-5);
}

TEST_CASE("series inversion of Taylor data") {
  SUBCASE("constant: reciprocal") {
    auto c = [](double, int, double) { return Mat::Constant(1, 1, 2.0); };
    PolarFn f = [](const PolarPoint& q, JetSpec s) {
      return JetMat::constant(s, Mat::Constant(1, 1, 2.0), q.x.size());
    };
    auto t = taylor_from_closed_form(f, 1, 1, {c, [](double, int, double) {
                                                 return Mat::Zero(1, 1);
                                               }});
    auto inv = invert_taylor(t);
    CHECK(std::abs(inv.coefficients[0](0.0, 1, 0.0)(0, 0) -
                   cplx(0.5, 0.0)) < 1e-14);
    CHECK(inv.coefficients[1](0.0, 1, 0.0).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("e^{i theta} - rho: geometric coefficient ladder") {
    auto t = taylor_expand_northpole(
        [](const PolarPoint& q, JetSpec s) {
          Jet rho = Jet::variable(s, q.x.size(), q.rho, 0);
          Jet v = Jet::constant(s, q.x.size(), std::exp(cplx(0.0, q.theta))) -
                  rho;
          return JetMat::from_scalar(v);
        },
        1, 1, 3, [] {
          TaylorVerification v;
          v.thetas = {1.1};
          return v;
        }());
    auto inv = invert_taylor(t, [] {
      TaylorVerification v;
      v.thetas = {1.1};
      return v;
    }());
    const double th = 1.1;
    for (int j = 0; j <= 3; ++j) {
      const cplx expect = std::exp(cplx(0.0, -double(j + 1) * th));
      CHECK(std::abs(inv.coefficients[size_t(j)](0.0, 1, th)(0, 0) - expect) <
            1e-5);
    }
  }
  SUBCASE("vanishing leading coefficient is rejected") {
    auto t = taylor_expand_northpole(rho_polar(), 1, 1, 2);
    CHECK_THROWS_AS(invert_taylor(t), PsdoError);
  }
}

TEST_CASE("homogeneous extension of rho") {
  auto a = arccos_taylor_symbol();
  SUBCASE("chi * 1 for constant data") {
    auto one = [](double, int, double) { return Mat::Identity(1, 1); };
    PolarFn f = [](const PolarPoint& q, JetSpec s) {
      return JetMat::constant(s, Mat::Identity(1, 1), q.x.size());
    };
    auto t = taylor_from_closed_form(f, 1, 1, {one});
    auto sym = homog_extend(t, 1.0);
    CHECK(sym->value(0.0, 0.3, 1.0, 0.0)(0, 0) == cplx(0.0, 0.0));
    CHECK(std::abs(sym->value(0.0, 2.0, 1.0, 0.0)(0, 0) - cplx(1.0, 0.0)) <
          1e-13);
  }
  SUBCASE("value arccos(1/sqrt 2) = pi/4 at (1,1)") {
    CHECK(std::abs(a->value(0.0, 1.0, 1.0, 0.0)(0, 0).real() - M_PI / 4.0) <
          1e-12);
  }
  SUBCASE("vanishing limit family") {
    auto lf = limit_family(a);
    CHECK(lf.is_zero);
  }
}

TEST_CASE("nonvanishing leading data gives the excised angular limit") {
  // data cos(rho) e^{i theta}: a0 = e^{i theta}, limit chi(xi) e^{i theta}
  PolarFn f = [](const PolarPoint& q, JetSpec s) {
    Jet rho = Jet::variable(s, q.x.size(), q.rho, 0);
    return JetMat::from_scalar(rho.cos().scaled(std::exp(cplx(0.0, q.theta))));
  };
  auto t = taylor_expand_northpole(f, 1, 1, 2);
  auto sym = homog_extend(t, 1.0);
  auto lf = limit_family(sym);
  CHECK_FALSE(lf.is_zero);
  const double th = 0.4;
  CHECK(std::abs(lf.symbol->value(0.0, 5.0, 0.0, th)(0, 0) -
                 std::exp(cplx(0.0, th))) < 1e-9);
  CHECK(lf.symbol->value(0.0, 0.2, 0.0, th).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("angular symbol") {
  SUBCASE("classical leading part: constant in phi") {
    auto a = classical_model_symbol();
    auto ang = angular_symbol(a);
    for (int phi : {1, -1})
      CHECK(std::abs(ang.evaluator(0.0, phi, 1.9)(0, 0) -
                     std::exp(cplx(0.0, 1.9))) < 1e-9);
  }
  SUBCASE("reduced resolvent: e^{i theta} from the pole") {
    auto ang = angular_symbol(resolvent_reduced_symbol());
    CHECK(std::abs(ang.evaluator(0.0, 1, 2.4)(0, 0) -
                   std::exp(cplx(0.0, 2.4))) < 1e-9);
  }
  SUBCASE("zero symbol") {
    auto ang = angular_symbol(scale(0.0, classical_model_symbol()));
    CHECK(ang.evaluator(0.0, 1, 0.3).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("no principal data") {
    CHECK_THROWS_AS(angular_symbol(arctan_tau_symbol()), PsdoError);
  }
}

TEST_CASE("expansion diverges for data without Taylor asymptotics") {
  // sin(log rho) oscillates: no expansion in powers of rho
  PolarFn f = [](const PolarPoint& q, JetSpec s) {
    Jet rho = Jet::variable(s, q.x.size(), q.rho, 0);
    return JetMat::from_scalar(rho.log().sin());
  };
  CHECK_THROWS_AS(taylor_expand_northpole(f, 1, 1, 1), PsdoError);
}
