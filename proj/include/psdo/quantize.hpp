#pragma once

#include <optional>
#include <string>

#include "psdo/grid.hpp"
#include "psdo/nodes.hpp"
#include "psdo/symbol.hpp"

namespace psdo {

// Exact matrix of Op(a)(lambda) on the Fourier modes |k| <= K with fiber
// blocks. Block (k', k) is the (k'-k)-th Fourier coefficient in x of
// a(., k, lambda).
struct TruncatedOperator {
  Mat matrix;  // ((2K+1) N1) x ((2K+1) N0)
  Lambda lambda;
  int K = 0;
  int N0 = 1, N1 = 1;
  double sobolev_s = 0.0;

  int dim_rows() const { return (2 * K + 1) * N1; }
  int dim_cols() const { return (2 * K + 1) * N0; }
  Eigen::Block<const Mat> block(int krow, int kcol) const {
    return matrix.block((krow + K) * N1, (kcol + K) * N0, N1, N0);
  }
};

TruncatedOperator quantize(const SymbolPtr& a, const Lambda& lambda,
                           const CircleGrid& grid);
// serial reference assembly, kept for the kernel comparison tests
TruncatedOperator quantize_serial(const SymbolPtr& a, const Lambda& lambda,
                                  const CircleGrid& grid);

// H^s -> H^t operator norm on the truncated space: largest singular value
// of D_t T D_s^{-1}, D_r = diag(<k>^r).
double sobolev_opnorm(const TruncatedOperator& T, double s, double t);

TruncatedOperator oracle_compose(const TruncatedOperator& A,
                                 const TruncatedOperator& B);

struct ConditionReport {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double condition = 0.0;
  bool regularized = false;
};

struct Regularizer {
  bool tikhonov = false;
  double eps = 0.0;
  static Regularizer none() { return {}; }
  static Regularizer tik(double eps) { return {true, eps}; }
};

// inverse (or Tikhonov-regularized pseudo-inverse) with condition report;
// throws SingularToTolerance when sigma_min < 1e-12 sigma_max unregularized
TruncatedOperator oracle_invert(const TruncatedOperator& T,
                                const Regularizer& reg, ConditionReport* rep);

// identity on the truncated space matching T's column layout
TruncatedOperator truncated_identity(int K, int N, const Lambda& lambda);

// restriction of the difference to the interior band |k| <= K/2 (both sides),
// measured in H^s operator norm; `annulus` restricts further to
// K/4 <= |k| <= K/2, quarantining the non-asymptotic core as well as the
// truncation edge
double interior_band_error(const TruncatedOperator& A,
                           const TruncatedOperator& B, double s = 0.0,
                           bool annulus = false);

// --- smoothing families -----------------------------------------------------

// lambda-indexed matrix family with measured decay certificates
struct SmoothingKernel {
  std::shared_ptr<const OperatorFamilyData> data;
  // sup over the grid of <tau>^m ||matrix(lambda)|| for m = 0..3
  std::array<double, 4> decay_certificate{};
  bool vanishing_at_infinity = false;

  const Mat& at(int i) const { return data->matrices[size_t(i)]; }
  int size() const { return int(data->lambdas.size()); }
};

SmoothingKernel encode_smoothing(std::vector<Lambda> lambdas,
                                 std::vector<Mat> matrices, int K, int N0,
                                 int N1);
// embed the family back into the symbol calculus
SymbolPtr smoothing_symbol(const SmoothingKernel& k);

// --- export -----------------------------------------------------------------

// JSON header (shape, lambda, K) + base64 little-endian column-major
// complex-double payload
std::string export_operator_json(const TruncatedOperator& T);
TruncatedOperator import_operator_json(const std::string& text);

std::string base64_encode(const unsigned char* data, size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

}  // namespace psdo
