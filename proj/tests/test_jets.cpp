#include <cmath>

#include "doctest.h"
#include "psdo/jets.hpp"

using namespace psdo;

namespace {
double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }
}

TEST_CASE("jet derivatives of (1+xi^2)^(s/2) match closed forms") {
  const double xi = 1.7, s = -1.0;
  JetSpec sp{5, 1, 1};
  Jet j = Jet::variable(sp, 1, xi, 0);
  Jet u = j * j;
  u.coeff(0, 0, 0) += Arr::Constant(1, 1.0);
  Jet f = u.pow(0.5 * s);

  const double b = bracket(xi);
  // f = 1/b, f' = -xi/b^3, f'' = (2 xi^2 - 1)/b^5
  CHECK(std::abs(f.coeff(0, 0, 0)(0) - 1.0 / b) < 1e-14);
  CHECK(std::abs(f.coeff(1, 0, 0)(0) - (-xi / std::pow(b, 3))) < 1e-14);
  const double f2 = (2.0 * xi * xi - 1.0) / std::pow(b, 5);
  CHECK(std::abs(f.coeff(2, 0, 0)(0) * 2.0 - f2) < 1e-13);
}

TEST_CASE("jet exp/sin/cos against finite differences") {
  JetSpec sp{4, 1, 1};
  const double x0 = 0.3;
  Jet v = Jet::variable(sp, 1, x0, 0);
  Jet g = (v * v).sin() + v.exp().scaled(0.5);
  auto fn = [](double t) { return std::sin(t * t) + 0.5 * std::exp(t); };
  const double h = 1e-5;
  const double d1 = (fn(x0 + h) - fn(x0 - h)) / (2 * h);
  const double d2 = (fn(x0 + h) - 2 * fn(x0) + fn(x0 - h)) / (h * h);
  CHECK(std::abs(g.coeff(0, 0, 0)(0).real() - fn(x0)) < 1e-14);
  CHECK(std::abs(g.coeff(1, 0, 0)(0).real() - d1) < 1e-8);
  CHECK(std::abs(g.coeff(2, 0, 0)(0).real() * 2.0 - d2) < 1e-5);
}

TEST_CASE("arccos jet reproduces the polar angle derivative") {
  // d/dxi arccos(tau/|(xi,tau)|) = (xi/|xi|) tau/(tau^2+xi^2)
  const double xi = 2.0, tau = 1.0;
  JetSpec sp{2, 1, 2};
  Jet jxi = Jet::variable(sp, 1, xi, 0);
  Jet jtau = Jet::variable(sp, 1, tau, 2);
  Jet r2 = jxi * jxi + jtau * jtau;
  Jet w = jtau * r2.pow(-0.5);
  Jet rho = w.arccos();
  const double expected = (xi > 0 ? 1.0 : -1.0) * tau / (tau * tau + xi * xi);
  CHECK(std::abs(rho.coeff(1, 0, 0)(0).real() - expected) < 1e-12);
  CHECK(std::abs(rho.coeff(1, 0, 0)(0).real() - 0.2) < 1e-12);
  // d/dtau arccos(tau/r) = -|xi| / (tau^2 + xi^2)
  const double dtau = -std::abs(xi) / (tau * tau + xi * xi);
  CHECK(std::abs(rho.coeff(0, 0, 1)(0).real() - dtau) < 1e-12);
}

TEST_CASE("mixed-variable jet products convolve correctly") {
  JetSpec sp{3, 3, 1};
  const double xi = 0.7;
  ArrR xv = ArrR::Constant(2, 1.1);
  Jet a = Jet::variable(sp, xv.cast<cplx>(), 1);  // x
  Jet b = Jet::variable(sp, 2, xi, 0);            // xi
  Jet p = (a * a) * b;  // x^2 xi
  // d^2/dx^2 d/dxi (x^2 xi) = 2; Taylor coeff = 2 / (2! 1!) = 1
  CHECK(std::abs(p.coeff(1, 2, 0)(0) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(p.coeff(1, 1, 0)(1) - cplx(2.0 * 1.1, 0.0)) < 1e-14);
}

TEST_CASE("matrix jet series inverse") {
  JetSpec sp{3, 1, 1};
  Mat A0(2, 2), A1(2, 2);
  A0 << 2.0, 0.5, 0.0, 1.0;
  A1 << 0.1, 0.0, 0.3, -0.2;
  JetMat A = JetMat::constant(sp, A0, 1);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) A.at(r, c).coeff(1, 0, 0)(0) = A1(r, c);
  JetMat B = A.inverse();
  JetMat P = A * B;
  CHECK((P.coeff(0, 0, 0, 0) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(P.coeff(1, 0, 0, 0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(P.coeff(2, 0, 0, 0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("smoothstep is exactly 0/1 outside the window, monotone inside") {
  CHECK(smoothstep(-0.1) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(2.0) == 1.0);
  CHECK(std::abs(smoothstep(0.5) - 0.5) < 1e-12);
  double prev = 0.0;
  for (int i = 1; i <= 50; ++i) {
    double v = smoothstep(i / 50.0);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("excision cutoff and its jets") {
  CHECK(excision(0.3) == 0.0);
  CHECK(excision(0.5) == 0.0);
  CHECK(excision(1.0) == 1.0);
  CHECK(excision(-3.0) == 1.0);
  JetSpec sp{3, 1, 1};
  Jet j = Jet::variable(sp, 1, 0.75, 0);
  Jet chi = excision_jet(j);
  const double h = 1e-6;
  const double fd = (excision(0.75 + h) - excision(0.75 - h)) / (2 * h);
  CHECK(std::abs(chi.coeff(1, 0, 0)(0).real() - fd) < 1e-6);
  // flat regions have vanishing jets
  Jet flat = excision_jet(Jet::variable(sp, 1, 2.0, 0));
  CHECK(std::abs(flat.coeff(0, 0, 0)(0).real() - 1.0) == 0.0);
  CHECK(std::abs(flat.coeff(1, 0, 0)(0)) == 0.0);
}

TEST_CASE("derivative extraction rescales Taylor coefficients") {
  JetSpec sp{4, 1, 1};
  Jet v = Jet::variable(sp, 1, 0.5, 0);
  Jet f = v * v * v;  // xi^3
  Jet d2 = f.derivative(2, 0, 0, JetSpec{2, 1, 1});
  // d^2 xi^3 = 6 xi; value and first coefficient (= 6 / 1!)
  CHECK(std::abs(d2.coeff(0, 0, 0)(0).real() - 3.0) < 1e-14);
  CHECK(std::abs(d2.coeff(1, 0, 0)(0).real() - 6.0) < 1e-14);
}
