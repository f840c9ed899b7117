#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace psdo {

using cplx = std::complex<double>;
using Arr = Eigen::ArrayXcd;
using ArrR = Eigen::ArrayXd;
using Mat = Eigen::MatrixXcd;

// Extents (derivative order + 1) per variable of a truncated Taylor jet.
// Variable slots are positional; symbol evaluation uses (v0, v1, v2) =
// (xi, x, tau), polar evaluation uses (v0, v1) = (rho, x).
struct JetSpec {
  int n0 = 1, n1 = 1, n2 = 1;

  int size() const { return n0 * n1 * n2; }
  int flat(int i, int j, int k) const { return (i * n1 + j) * n2 + k; }
  bool covers(const JetSpec& o) const {
    return n0 >= o.n0 && n1 >= o.n1 && n2 >= o.n2;
  }
  static JetSpec lub(const JetSpec& a, const JetSpec& b) {
    return {std::max(a.n0, b.n0), std::max(a.n1, b.n1), std::max(a.n2, b.n2)};
  }
  // highest total derivative order representable
  int total_order() const { return (n0 - 1) + (n1 - 1) + (n2 - 1); }
  bool operator==(const JetSpec& o) const {
    return n0 == o.n0 && n1 == o.n1 && n2 == o.n2;
  }
};

// Batched scalar jet: coeff(i,j,k) is the Taylor coefficient of
// dv0^i dv1^j dv2^k / (i! j! k!), stored as an array over the batch axis.
// All coefficients live in one flat buffer, coefficient-major.
class Jet {
 public:
  using View = Eigen::Map<Arr>;
  using CView = Eigen::Map<const Arr>;

  Jet() = default;
  Jet(JetSpec s, Eigen::Index batch);  // all-zero

  static Jet constant(JetSpec s, const Arr& value);
  static Jet constant(JetSpec s, Eigen::Index batch, cplx value);
  // value + unit first derivative in slot `var`
  static Jet variable(JetSpec s, const Arr& value, int var);
  static Jet variable(JetSpec s, Eigen::Index batch, double value, int var);

  const JetSpec& spec() const { return spec_; }
  Eigen::Index batch() const { return batch_; }

  View coeff(int i, int j, int k) {
    return View(c_.data() + size_t(spec_.flat(i, j, k)) * batch_, batch_);
  }
  CView coeff(int i, int j, int k) const {
    return CView(c_.data() + size_t(spec_.flat(i, j, k)) * batch_, batch_);
  }
  CView value() const { return coeff(0, 0, 0); }
  const cplx* coeff_ptr(int i, int j, int k) const {
    return c_.data() + size_t(spec_.flat(i, j, k)) * batch_;
  }
  cplx* coeff_ptr(int i, int j, int k) {
    return c_.data() + size_t(spec_.flat(i, j, k)) * batch_;
  }

  Jet promoted(JetSpec s) const;  // embed into a covering spec

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;  // truncated convolution
  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet scaled(cplx f) const;
  Jet conjugated() const;  // valid because the variables are real

  // Taylor coefficients of the derivative d^d0_v0 d^d1_v1 d^d2_v2, truncated
  // to `out`. Requires this jet to hold the shifted coefficients.
  Jet derivative(int d0, int d1, int d2, JetSpec out) const;

  // f applied through the jet. fderivs(m) must return f^(m) evaluated at
  // the jet's constant term, for m = 0..total_order().
  Jet compose(const std::function<Arr(int)>& fderivs) const;

  Jet reciprocal() const;
  Jet pow(double s) const;       // principal branch, constant term off zero
  Jet sqrt() const { return pow(0.5); }
  Jet exp() const;
  Jet sin() const;
  Jet cos() const;
  Jet log() const;
  Jet arccos() const;  // constant term strictly inside (-1, 1)
  Jet arctan() const;

  // real polynomial sum_m coeffs[m] t^m applied through the jet
  Jet polynomial(const std::vector<double>& coeffs) const;

 private:
  JetSpec spec_;
  Eigen::Index batch_ = 0;
  Arr c_;  // spec.size() * batch, coefficient-major
};

// Matrix of batched jets, row-major entries.
class JetMat {
 public:
  JetMat() = default;
  JetMat(JetSpec s, int rows, int cols, Eigen::Index batch);  // zero

  static JetMat identity(JetSpec s, int n, Eigen::Index batch);
  static JetMat constant(JetSpec s, const Mat& value, Eigen::Index batch);
  static JetMat from_scalar(const Jet& j);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const JetSpec& spec() const { return spec_; }
  Eigen::Index batch() const { return batch_; }

  Jet& at(int r, int c) { return e_[r * cols_ + c]; }
  const Jet& at(int r, int c) const { return e_[r * cols_ + c]; }

  // value (constant coefficient) at one batch element
  Mat value(Eigen::Index b = 0) const;
  // Taylor coefficient matrix (i,j,k) at one batch element
  Mat coeff(int i, int j, int k, Eigen::Index b = 0) const;

  JetMat promoted(JetSpec s) const;
  JetMat operator+(const JetMat& o) const;
  JetMat operator-(const JetMat& o) const;
  JetMat operator*(const JetMat& o) const;  // matrix product
  JetMat scaled(cplx f) const;
  JetMat mul_scalar(const Jet& s) const;
  JetMat conj_transpose() const;
  JetMat derivative(int d0, int d1, int d2, JetSpec out) const;

  // series inverse; square, constant term pointwise invertible
  JetMat inverse() const;

  // in-place sum; reads the overlap of o's spec (missing coefficients are
  // zeros), scaled by f
  void accumulate(const JetMat& o, cplx f = cplx(1.0, 0.0));

  double max_abs_value() const;  // max over entries/batch of |constant term|

 private:
  JetSpec spec_;
  int rows_ = 0, cols_ = 0;
  Eigen::Index batch_ = 0;
  std::vector<Jet> e_;
};

// out += coef * (d^da_v0 A) . (d^db_v1 B), the fused composition-term
// accumulation: Taylor-shifted reads with factorial weights, no
// intermediate jets. Shapes must satisfy A.cols == B.rows == out-compatible.
void accumulate_shifted_product(JetMat& out, const JetMat& A, int da,
                                const JetMat& B, int db, cplx coef);

// out += coef * d^da_v0 d^da_v1 (A conjugate-transposed)
void accumulate_shifted_adjoint(JetMat& out, const JetMat& A, int da,
                                cplx coef);

// C^n polynomial step: 0 for t <= 0, 1 for t >= 1, monotone in between,
// with SMOOTHSTEP_ORDER vanishing derivatives at both knots.
inline constexpr int kSmoothstepOrder = 10;
double smoothstep(double t);
Jet smoothstep(const Jet& t);

// Zero-excision cutoff: 0 for |xi| <= radius/2, 1 for |xi| >= radius.
double excision(double xi, double radius = 1.0);
Jet excision_jet(const Jet& xi, double radius = 1.0);

}  // namespace psdo
