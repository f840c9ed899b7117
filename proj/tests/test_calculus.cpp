#include <cmath>

#include "doctest.h"
#include "psdo/calculus.hpp"
#include "psdo/catalog.hpp"
#include "psdo/quantize.hpp"
#include "psdo/seminorm.hpp"

using namespace psdo;

namespace {

const Lambda kLam{2.0, 0.9};

// exact <xi>^-1 Taylor step-1 error at frequency k, for the expansion
// sum_{a<=N} d^a f(k)/a!; hand-coded derivatives, independent of the jets
double shift_error(int k, int N) {
  const double x = double(k);
  const double b = std::sqrt(1.0 + x * x);
  const double f0 = 1.0 / b;
  const double f1 = -x / std::pow(b, 3);
  const double f2 = (2.0 * x * x - 1.0) / std::pow(b, 5);
  const double f3 = (9.0 * x - 6.0 * x * x * x) / std::pow(b, 7);
  const double d[4] = {f0, f1, f2 / 2.0, f3 / 6.0};
  double taylor = 0.0;
  for (int a = 0; a <= N; ++a) taylor += d[a];
  const double truth = 1.0 / std::sqrt(1.0 + (x + 1.0) * (x + 1.0));
  return std::abs(truth - taylor);
}

}  // namespace

TEST_CASE("identity is a two-sided unit for the composition expansion") {
  auto id = constant_symbol(cplx(1.0, 0.0));
  auto b = resolvent_reduced_perturbed_symbol(0.1);
  for (auto lr : {leibniz_product(id, b, 3), leibniz_product(b, id, 3)}) {
    CHECK(lr.exact);
    for (double xi : {-3.0, 0.0, 2.0}) {
      Mat u = lr.symbol->value(0.7, xi, 2.0, 0.9);
      Mat v = b->value(0.7, xi, 2.0, 0.9);
      CHECK((u - v).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("x-only times multiplier composes exactly") {
  auto a = phase_symbol(1);
  auto b = bessel_symbol(-1.0);
  auto lr = leibniz_product(a, b, 0);
  CHECK(lr.exact);
  Mat v = lr.symbol->value(0.5, 3.0, 0.0, 0.0);
  CHECK(std::abs(v(0, 0) - std::exp(cplx(0.0, 0.5)) / std::sqrt(10.0)) <
        1e-14);
}

TEST_CASE("two multipliers compose pointwise with all higher terms zero") {
  auto p = bessel_symbol(-1.0);
  auto q = param_bessel_symbol(1.0);
  for (int N : {0, 3}) {
    auto lr = leibniz_product(p, q, N);
    CHECK(lr.exact);
    Mat v = lr.symbol->value(0.0, 2.0, 3.0, 0.0);
    const double expect = std::sqrt(14.0) / std::sqrt(5.0);
    CHECK(std::abs(v(0, 0).real() - expect) < 1e-13);
  }
}

TEST_CASE("frequency-shift expansion: errors match the Taylor remainder") {
  auto b = bessel_symbol(-1.0);
  auto a = phase_symbol(1);
  // multiplier # x-function is the nontrivial order
  for (int N : {0, 1, 2, 3}) {
    auto lr = leibniz_product(b, a, N);
    CHECK_FALSE(lr.exact);
    REQUIRE(lr.remainder);
    for (int k : {-5, 2, 7}) {
      Mat v = lr.symbol->value(0.3, double(k), 0.0, 0.0);
      // expansion = e^{ix} sum d^a f(k)/a!
      cplx phase = std::exp(cplx(0.0, 0.3));
      cplx truth = phase / std::sqrt(1.0 + (k + 1.0) * (k + 1.0));
      CHECK(std::abs(std::abs(v(0, 0) - truth) - shift_error(k, N)) < 1e-12);
      // remainder closes the gap to the exact composition
      Mat r = lr.remainder->value(0.3, double(k), 0.0, 0.0);
      CHECK(std::abs(v(0, 0) + r(0, 0) - truth) < 1e-12);
    }
  }
}

TEST_CASE("quantized expansion against the matrix oracle, decreasing in N") {
  const int K = 16;
  auto g = CircleGrid::make(K);
  auto b = bessel_symbol(-1.0);
  auto a = phase_symbol(1);
  auto oracle =
      oracle_compose(quantize(b, kLam, g), quantize(a, kLam, g));
  double prev = 1e9;
  for (int N = 0; N <= 3; ++N) {
    auto lr = leibniz_product(b, a, N);
    auto Q = quantize(lr.symbol, kLam, g);
    const double err = interior_band_error(Q, oracle, 0.0, /*annulus=*/true);
    CHECK(err < prev);
    prev = err;
  }
  // with the tracked remainder the composition is exact on the interior band
  auto full = quantize(leibniz_with_remainder(b, a, 3), kLam, g);
  CHECK(interior_band_error(full, oracle, 0.0, false) < 1e-8);
}

TEST_CASE("adjoint expansion matches the conjugate-transpose oracle") {
  const int K = 12;
  auto g = CircleGrid::make(K);
  Lambda lam{10.0, 0.4};
  for (const char* id : {"hardy", "bessel-inv", "phase"}) {
    auto a = catalog_lookup(id);
    auto adj = adjoint_symbol(a, 4);
    auto Q = quantize(adj, lam, g);
    Mat oracle = quantize(a, lam, g).matrix.adjoint();
    TruncatedOperator O;
    O.matrix = oracle;
    O.lambda = lam;
    O.K = K;
    O.N0 = O.N1 = 1;
    CHECK(interior_band_error(Q, O, 0.0, false) < 1e-10);
  }
  // hermitian multiplier is its own adjoint, exactly
  auto h = bessel_symbol(-1.0);
  auto adj = adjoint_symbol(h, 4);
  CHECK(std::abs(adj->value(0.0, 3.0, 1.0, 0.0)(0, 0) -
                 h->value(0.0, 3.0, 1.0, 0.0)(0, 0)) < 1e-14);
  // mixed x/xi symbol needs the expansion; tau >= 10 keeps the band clean
  auto mixed = resolvent_reduced_perturbed_symbol(0.1);
  auto madj = adjoint_symbol(mixed, 4);
  Lambda lam2{10.0, 2.2};
  auto Q = quantize(madj, lam2, CircleGrid::make(K));
  Mat oracle = quantize(mixed, lam2, CircleGrid::make(K)).matrix.adjoint();
  TruncatedOperator O;
  O.matrix = oracle;
  O.lambda = lam2;
  O.K = K;
  O.N0 = O.N1 = 1;
  CHECK(interior_band_error(Q, O, 0.0, true) < 1e-6);
}

TEST_CASE("scalar x-function adjoint is the conjugate") {
  auto f = band_limited_symbol({cplx(0.2, 0.1), cplx(1.0, 0.0),
                                cplx(0.0, -0.5)});
  auto adj = adjoint_symbol(f, 3);
  for (double x : {0.0, 1.0, 4.4}) {
    cplx v = f->value(x, 0.0, 0.0, 0.0)(0, 0);
    cplx w = adj->value(x, 0.0, 0.0, 0.0)(0, 0);
    CHECK(std::abs(w - std::conj(v)) < 1e-14);
  }
}

TEST_CASE("asymptotic summation") {
  SUBCASE("single component only gains the excision factor") {
    auto c0 = bessel_symbol(-1.0);
    auto as = asymptotic_sum({c0});
    REQUIRE(as.cutoffs.size() == 1);
    for (double xi : {2.0, 5.0, -30.0}) {
      Mat u = as.symbol->value(0.0, xi, 1.0, 0.0);
      Mat v = c0->value(0.0, xi, 1.0, 0.0);
      CHECK((u - v).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("geometric ladder <xi>^-k") {
    std::vector<SymbolPtr> comps;
    for (int k = 0; k <= 4; ++k) comps.push_back(bessel_symbol(-double(k)));
    auto as = asymptotic_sum(comps);
    // remainder after two terms has finite order-(-2) sup:
    // (sum - c0 chi_0 - c1 chi_1) <xi>^2 bounded by the tail bound
    auto tail = sub(as.symbol,
                    sum({pointwise_scalar_product(
                             scaled_excision_symbol(as.cutoffs[0]), comps[0]),
                         pointwise_scalar_product(
                             scaled_excision_symbol(as.cutoffs[1]), comps[1])}));
    auto strip = ParameterStrip::make(0.0, 0.0, {1.0}, {0.0});
    auto v = estimate_seminorm(tail, SeminormSpec::fixed(-2.0), strip,
                               CircleGrid::make(32));
    CHECK(std::isfinite(v));
    CHECK(v <= 2.0 + 1e-6);
  }
  SUBCASE("all-zero components give zero") {
    std::vector<SymbolPtr> comps = {
        constant_symbol(cplx(0.0, 0.0)),
        scale(0.0, bessel_symbol(-1.0)),
    };
    auto as = asymptotic_sum(comps);
    CHECK(as.symbol->value(0.0, 3.0, 1.0, 0.0).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("bad order ladder is rejected") {
    CHECK_THROWS_AS(
        asymptotic_sum({bessel_symbol(0.0), bessel_symbol(-0.5)}), PsdoError);
  }
}

TEST_CASE("limit families by structure") {
  SUBCASE("classical order zero: value of the principal at the pole") {
    auto a = classical_model_symbol();
    auto lf = limit_family(a);
    CHECK_FALSE(lf.is_zero);
    for (double th : {0.0, 1.2, 3.0}) {
      cplx v = lf.symbol->value(0.4, 7.0, 0.0, th)(0, 0);
      CHECK(std::abs(v - std::exp(cplx(0.0, th))) < 1e-12);
    }
  }
  SUBCASE("compensated fixed order vanishes") {
    auto a = leibniz_node(param_bessel_symbol(-1.0), bessel_symbol(1.0), 3);
    auto lf = limit_family(a);
    CHECK(lf.is_zero);
  }
  SUBCASE("reduced resolvent keeps only the parameter part") {
    auto lf = limit_family(resolvent_reduced_symbol());
    CHECK_FALSE(lf.is_zero);
    cplx v = lf.symbol->value(0.0, 3.0, 0.0, 2.0)(0, 0);
    CHECK(std::abs(v - std::exp(cplx(0.0, 2.0))) < 1e-12);
  }
  SUBCASE("order reductions compose to one") {
    auto rs = leibniz_node(param_bessel_symbol(-2.0), param_bessel_symbol(2.0),
                           0);
    auto lf = limit_family(rs);
    CHECK_FALSE(lf.is_zero);
    CHECK(std::abs(lf.symbol->value(0.0, 5.0, 0.0, 0.3)(0, 0) -
                   cplx(1.0, 0.0)) < 1e-12);
  }
  SUBCASE("bare positive order is not in the calculus") {
    CHECK_THROWS_AS(limit_family(bessel_symbol(1.0)), PsdoError);
    CHECK_THROWS_AS(limit_family(tau_phase_symbol(1)), PsdoError);
  }
  SUBCASE("fixed symbols of order <= 0 are their own limit") {
    auto lf = limit_family(hardy_multiplier_symbol());
    CHECK_FALSE(lf.is_zero);
    CHECK(lf.symbol->value(0.0, 3.0, 0.0, 0.0)(0, 0).real() == 1.0);
    CHECK(lf.symbol->value(0.0, -3.0, 0.0, 0.0)(0, 0).real() == 0.0);
  }
}

TEST_CASE("limit-family decay is measured on the grid") {
  auto a = classical_model_symbol();
  auto strip = ParameterStrip::make(0.0, M_PI, log_spaced(10.0, 1e3, 4),
                                    linear_spaced(0.0, M_PI, 3));
  auto grid = CircleGrid::make(16);
  LimitOptions opt;
  opt.strip = &strip;
  opt.grid = &grid;
  auto lf = limit_family(a, opt);
  REQUIRE(lf.validated_slope.has_value());
  CHECK(*lf.validated_slope <= -0.9);
}

TEST_CASE("limit multiplicativity on a catalog pair") {
  auto a = classical_model_symbol();
  auto b = resolvent_reduced_symbol();
  auto ab = leibniz_node(a, b, 3);
  auto lab = limit_family(ab);
  auto la = limit_family(a);
  auto lb = limit_family(b);
  auto composed = leibniz_node(la.symbol, lb.symbol, 3);
  for (double th : {0.5, 2.5}) {
    cplx u = lab.symbol->value(0.0, 4.0, 0.0, th)(0, 0);
    cplx v = composed->value(0.0, 4.0, 0.0, th)(0, 0);
    CHECK(std::abs(u - v) < 1e-6);
  }
}

TEST_CASE("membership by tau-derivative decay") {
  auto strip = ParameterStrip::make(0.0, 0.0, log_spaced(1.0, 1e3, 4), {0.0});
  auto grid = CircleGrid::make(8);
  SUBCASE("tau-independent symbols pass trivially") {
    auto v = membership_by_derivative_decay(bessel_symbol(-1.0), 0.5, strip,
                                            grid);
    CHECK(v.pass);
    REQUIRE(v.limit);
    CHECK(std::abs(v.limit->value(0.0, 2.0, 0.0, 0.0)(0, 0).real() -
                   1.0 / std::sqrt(5.0)) < 1e-12);
  }
  SUBCASE("arctan profile passes with the closed-form limit") {
    auto v = membership_by_derivative_decay(arctan_tau_symbol(), 0.5, strip,
                                            grid);
    CHECK(v.pass);
    REQUIRE(v.limit);
    const double m = 1.0 + 1.0 / std::sqrt(5.0);
    const double expect = M_PI / 2.0 * m;
    const double got = v.limit->value(0.0, 2.0, 0.0, 0.0)(0, 0).real();
    CHECK(std::abs(got - expect) < 1e-3);
  }
  SUBCASE("slowly decaying oscillation fails") {
    auto v = membership_by_derivative_decay(sinlog_tau_symbol(), 0.5, strip,
                                            grid);
    CHECK_FALSE(v.pass);
  }
}
