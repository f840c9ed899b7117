#include <cmath>

#include "doctest.h"
#include "psdo/catalog.hpp"
#include "psdo/nodes.hpp"

using namespace psdo;

namespace {
double bracket2(double xi, double tau) {
  return std::sqrt(1.0 + xi * xi + tau * tau);
}
}

TEST_CASE("catalog values at sample points") {
  auto b = bessel_symbol(1.0);
  CHECK(std::abs(b->value(0.0, 3.0, 5.0, 0.0)(0, 0).real() -
                 std::sqrt(10.0)) < 1e-14);

  auto pb = param_bessel_symbol(-1.0);
  CHECK(std::abs(pb->value(0.2, 3.0, 4.0, 0.0)(0, 0).real() -
                 1.0 / bracket2(3.0, 4.0)) < 1e-14);

  auto ph = phase_symbol(1);
  CHECK(std::abs(ph->value(0.7, 0.0, 0.0, 0.0)(0, 0) -
                 std::exp(cplx(0.0, 0.7))) < 1e-14);

  auto tp = tau_phase_symbol(1);
  CHECK(std::abs(tp->value(0.0, 0.0, 2.0, M_PI / 2)(0, 0) -
                 cplx(0.0, 2.0)) < 1e-13);

  auto rr = resolvent_reduced_symbol();
  const double tau = 3.0, xi = 2.0, th = M_PI;
  cplx expect = (tau * std::exp(cplx(0.0, th)) - std::sqrt(1.0 + xi * xi)) /
                bracket2(xi, tau);
  CHECK(std::abs(rr->value(0.1, xi, tau, th)(0, 0) - expect) < 1e-13);
}

TEST_CASE("homogeneity in the large at t = 2 and t = 5") {
  // principal components scale exactly by construction of the polar form;
  // checked numerically through the cartesian evaluators
  for (const char* id : {"bessel1", "param-bessel-inv", "classical-model",
                         "resolvent-reduced", "toeplitz-model"}) {
    auto a = catalog_lookup(id);
    REQUIRE(a->principal());
    auto hc = a->principal();
    const double xi = 1.5, tau = 0.9, th = 1.0, x = 0.3;
    EvalPoint p{ArrR::Constant(1, x), xi, tau, th};
    Mat base = hc->eval_cartesian(p, JetSpec{1, 1, 1}).value(0);
    for (double t : {2.0, 5.0}) {
      EvalPoint q{ArrR::Constant(1, x), t * xi, t * tau, th};
      Mat scaled = hc->eval_cartesian(q, JetSpec{1, 1, 1}).value(0);
      Mat predicted = std::pow(t, hc->degree) * base;
      CHECK((scaled - predicted).cwiseAbs().maxCoeff() <
            1e-8 * std::max(1.0, predicted.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("polar and cartesian principal data agree on the semicircle") {
  auto a = resolvent_reduced_symbol();
  auto hc = a->principal();
  REQUIRE(hc);
  for (double rho : {0.3, 0.9, 1.4})
    for (int phi : {1, -1})
      for (double th : {0.0, 2.0}) {
        const double xi = 3.7 * std::sin(rho) * phi;  // radius 3.7
        const double tau = 3.7 * std::cos(rho);
        EvalPoint p{ArrR::Constant(1, 0.0), xi, tau, th};
        Mat cart = hc->eval_cartesian(p, JetSpec{1, 1, 1}).value(0);
        Mat pol = hc->eval_polar_value(0.0, phi, rho, th) *
                  std::pow(3.7, hc->degree);
        CHECK((cart - pol).cwiseAbs().maxCoeff() < 1e-10);
      }
}

TEST_CASE("hardy multiplier is exactly the nonnegative-frequency indicator") {
  auto h = hardy_multiplier_symbol();
  for (int k = -6; k <= 6; ++k) {
    const double v = h->value(0.0, double(k), 1.0, 0.0)(0, 0).real();
    CHECK(v == (k >= 0 ? 1.0 : 0.0));
  }
  // principal data: indicator of the positive half
  auto hc = h->principal();
  REQUIRE(hc);
  CHECK(hc->eval_polar_value(0.0, 1, 0.7, 0.0)(0, 0).real() == 1.0);
  CHECK(hc->eval_polar_value(0.0, -1, 0.7, 0.0)(0, 0).real() == 0.0);
}

TEST_CASE("rotated projection is pointwise idempotent and hermitian") {
  auto p = rotated_projection_symbol();
  for (double x : {0.0, 1.1, 2.9, 5.5}) {
    Mat m = p->value(x, 0.0, 0.0, 0.0);
    CHECK((m * m - m).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(m.trace().real() - 1.0) < 1e-14);  // rank one
  }
  // periodic even though u flips sign over one turn
  Mat a = p->value(0.3, 0.0, 0.0, 0.0);
  Mat b = p->value(0.3 + 2.0 * M_PI, 0.0, 0.0, 0.0);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sum and scale respect shapes and order bookkeeping") {
  auto s = sub(tau_phase_symbol(1), bessel_symbol(1.0));
  CHECK(s->order() == 1.0);
  auto rr = resolvent_reduced_symbol();
  CHECK(rr->order() == 0.0);
  CHECK(rr->weakly_classical());
  auto inv = excised_inverse_node(rr, 1.0);
  CHECK(inv->order() == 0.0);
  auto lp = leibniz_node(param_bessel_symbol(-2.0), bessel_symbol(1.0), 2);
  CHECK(lp->order() == -1.0);
  CHECK_THROWS_AS(sum({bessel_symbol(1.0), rotated_projection_symbol()}),
                  PsdoError);
  CHECK_THROWS_AS(leibniz_node(rotated_projection_symbol(),
                               bessel_symbol(1.0), 2),
                  PsdoError);
}

TEST_CASE("evaluation context caches shared subtrees consistently") {
  auto a = resolvent_reduced_perturbed_symbol(0.1);
  auto r = sub(constant_symbol(cplx(1.0, 0.0)),
               leibniz_node(a, excised_inverse_node(a, 1.0), 3));
  EvalPoint p{ArrR::LinSpaced(4, 0.0, 5.0), 3.0, 2.0, 1.3};
  EvalContext ctx(p);
  JetMat v1 = r->eval_jet(ctx, JetSpec{1, 1, 1});
  // fresh context must agree
  EvalContext ctx2(p);
  JetMat small = r->eval_jet(ctx2, JetSpec{1, 1, 1});
  for (Eigen::Index b = 0; b < 4; ++b)
    CHECK((v1.value(b) - small.value(b)).cwiseAbs().maxCoeff() < 1e-13);
}
