#include <cmath>

#include "doctest.h"
#include "psdo/catalog.hpp"
#include "psdo/quantize.hpp"

using namespace psdo;

namespace {
const Lambda kLam{2.0, 1.1};
}

TEST_CASE("identity quantizes to the identity matrix") {
  auto T = quantize(constant_symbol(cplx(1.0, 0.0)), kLam, CircleGrid::make(8));
  CHECK((T.matrix - Mat::Identity(17, 17)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("e^{ix} quantizes to the shift matrix") {
  const int K = 8;
  auto T = quantize(phase_symbol(1), kLam, CircleGrid::make(K));
  Mat expect = Mat::Zero(17, 17);
  for (int k = -K; k + 1 <= K; ++k) expect(k + 1 + K, k + K) = 1.0;
  CHECK((T.matrix - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("multiplier quantizes to a diagonal") {
  const int K = 8;
  auto T = quantize(bessel_symbol(1.0), kLam, CircleGrid::make(K));
  for (int k = -K; k <= K; ++k) {
    CHECK(std::abs(T.matrix(k + K, k + K).real() -
                   std::sqrt(1.0 + k * k)) < 1e-13);
  }
  // exactly block-diagonal for x-independent symbols
  Mat off = T.matrix;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sobolev operator norms") {
  const int K = 8;
  auto I = quantize(constant_symbol(cplx(1.0, 0.0)), kLam, CircleGrid::make(K));
  CHECK(sobolev_opnorm(I, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  auto D = quantize(bessel_symbol(1.0), kLam, CircleGrid::make(K));
  CHECK(sobolev_opnorm(D, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  auto H = quantize(hardy_multiplier_symbol(), kLam, CircleGrid::make(K));
  CHECK(sobolev_opnorm(H, 0.7, 0.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((H.matrix * H.matrix - H.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("oracle composition and the frequency-shift identity") {
  const int K = 8;
  auto g = CircleGrid::make(K);
  auto A = quantize(phase_symbol(1), kLam, g);
  auto B = quantize(bessel_symbol(-1.0), kLam, g);
  auto AB = oracle_compose(A, B);  // multiply then shift
  for (int k = -K; k + 1 <= K; ++k)
    CHECK(std::abs(AB.matrix(k + 1 + K, k + K) -
                   cplx(1.0 / std::sqrt(1.0 + k * k), 0.0)) < 1e-13);
  auto BA = oracle_compose(B, A);  // shift then multiply
  for (int k = -K; k + 1 <= K; ++k)
    CHECK(std::abs(BA.matrix(k + 1 + K, k + K) -
                   cplx(1.0 / std::sqrt(1.0 + (k + 1) * (k + 1)), 0.0)) <
          1e-13);
  Lambda other{3.0, 1.1};
  auto C = quantize(bessel_symbol(-1.0), other, g);
  CHECK_THROWS_AS(oracle_compose(A, C), PsdoError);
}

TEST_CASE("oracle inversion: diagonal formula and singular shift") {
  const int K = 8;
  const double tau = 10.0;
  Lambda lam{tau, M_PI / 2};
  // tau e^{i theta} + i xi on the nonnegative-frequency block
  auto g = CircleGrid::make(K);
  auto A = quantize(toeplitz_model_symbol(), lam, g);
  // restrict by hand to k >= 0 and invert the diagonal
  ConditionReport rep;
  auto Ainv = oracle_invert(A, Regularizer::none(), &rep);
  for (int k = 0; k <= K; ++k) {
    cplx expect = 1.0 / (cplx(0.0, tau) + cplx(0.0, double(k)));
    CHECK(std::abs(Ainv.matrix(k + K, k + K) - expect) < 1e-13);
  }
  CHECK(rep.condition > 1.0);

  auto S = quantize(phase_symbol(1), lam, g);
  CHECK_THROWS_AS(oracle_invert(S, Regularizer::none(), nullptr), PsdoError);
  // Tikhonov route still produces a finite pseudo-inverse
  ConditionReport rep2;
  auto St = oracle_invert(S, Regularizer::tik(1e-8), &rep2);
  CHECK(std::isfinite(St.matrix.cwiseAbs().maxCoeff()));
  CHECK(rep2.regularized);
}

TEST_CASE("identity absorbs under oracle composition") {
  auto g = CircleGrid::make(6);
  auto A = quantize(resolvent_reduced_symbol(), kLam, g);
  auto I = truncated_identity(6, 1, kLam);
  CHECK((oracle_compose(A, I).matrix - A.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK((oracle_compose(I, A).matrix - A.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smoothing families: certificates and vanishing flags") {
  auto taus = log_spaced(1.0, 1e3, 2);
  std::vector<Lambda> lambdas;
  for (double t : taus) lambdas.push_back({t, 0.0});

  SUBCASE("zero family") {
    std::vector<Mat> ms(lambdas.size(), Mat::Zero(5, 5));
    auto k = encode_smoothing(lambdas, ms, 2, 1, 1);
    CHECK(k.vanishing_at_infinity);
    CHECK(k.decay_certificate[1] == 0.0);
  }
  SUBCASE("rank-one 1/(1+tau) family") {
    Eigen::VectorXcd u = Eigen::VectorXcd::Ones(5) / std::sqrt(5.0);
    Eigen::VectorXcd v = u;
    std::vector<Mat> ms;
    for (double t : taus) ms.push_back((1.0 / (1.0 + t)) * (u * v.adjoint()));
    auto k = encode_smoothing(lambdas, ms, 2, 1, 1);
    CHECK(k.vanishing_at_infinity);
    // <tau>/(1+tau) ||u v*|| stays near ||u|| ||v|| = 1
    CHECK(k.decay_certificate[1] == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("constant family is not vanishing") {
    std::vector<Mat> ms(lambdas.size(), Mat::Identity(5, 5));
    auto k = encode_smoothing(lambdas, ms, 2, 1, 1);
    CHECK_FALSE(k.vanishing_at_infinity);
  }
}

TEST_CASE("operator export round-trips bit-exactly") {
  auto T = quantize(resolvent_reduced_perturbed_symbol(0.1), kLam,
                    CircleGrid::make(5));
  auto text = export_operator_json(T);
  auto U = import_operator_json(text);
  CHECK(U.K == T.K);
  CHECK(U.lambda.tau == T.lambda.tau);
  CHECK((U.matrix - T.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("serial and parallel assembly agree exactly") {
  auto a = resolvent_reduced_perturbed_symbol(0.1);
  auto g = CircleGrid::make(6);
  auto P = quantize(a, kLam, g);
  auto S = quantize_serial(a, kLam, g);
  CHECK((P.matrix - S.matrix).cwiseAbs().maxCoeff() == 0.0);
}
