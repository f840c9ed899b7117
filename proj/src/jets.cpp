#include "psdo/jets.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace psdo {

Jet::Jet(JetSpec s, Eigen::Index batch) : spec_(s), batch_(batch) {
  c_.resize(s.size());
  for (auto& a : c_) a = Arr::Zero(batch);
}

Jet Jet::constant(JetSpec s, const Arr& value) {
  Jet j(s, value.size());
  j.c_[0] = value;
  return j;
}

Jet Jet::constant(JetSpec s, Eigen::Index batch, cplx value) {
  Jet j(s, batch);
  j.c_[0] = Arr::Constant(batch, value);
  return j;
}

Jet Jet::variable(JetSpec s, const Arr& value, int var) {
  Jet j = constant(s, value);
  const int idx = var == 0 ? (s.n0 > 1 ? s.flat(1, 0, 0) : -1)
                : var == 1 ? (s.n1 > 1 ? s.flat(0, 1, 0) : -1)
                           : (s.n2 > 1 ? s.flat(0, 0, 1) : -1);
  if (idx >= 0) j.c_[idx] = Arr::Constant(value.size(), cplx(1.0, 0.0));
  return j;
}

Jet Jet::variable(JetSpec s, Eigen::Index batch, double value, int var) {
  return variable(s, Arr::Constant(batch, cplx(value, 0.0)), var);
}

Jet Jet::promoted(JetSpec s) const {
  if (spec_ == s) return *this;
  // copy the overlap; shrinking drops coefficients the caller does not need
  Jet out(s, batch_);
  for (int i = 0; i < std::min(spec_.n0, s.n0); ++i)
    for (int j = 0; j < std::min(spec_.n1, s.n1); ++j)
      for (int k = 0; k < std::min(spec_.n2, s.n2); ++k)
        out.c_[s.flat(i, j, k)] = c_[spec_.flat(i, j, k)];
  return out;
}

Jet Jet::operator+(const Jet& o) const {
  if (!(spec_ == o.spec_)) {
    JetSpec s = JetSpec::lub(spec_, o.spec_);
    return promoted(s) + o.promoted(s);
  }
  Jet out = *this;
  for (size_t i = 0; i < c_.size(); ++i) out.c_[i] += o.c_[i];
  return out;
}

Jet Jet::operator-(const Jet& o) const {
  if (!(spec_ == o.spec_)) {
    JetSpec s = JetSpec::lub(spec_, o.spec_);
    return promoted(s) - o.promoted(s);
  }
  Jet out = *this;
  for (size_t i = 0; i < c_.size(); ++i) out.c_[i] -= o.c_[i];
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  *this = *this + o;
  return *this;
}

Jet Jet::operator-() const { return scaled(cplx(-1.0, 0.0)); }

Jet Jet::scaled(cplx f) const {
  Jet out = *this;
  for (auto& a : out.c_) a *= f;
  return out;
}

Jet Jet::conjugated() const {
  Jet out = *this;
  for (auto& a : out.c_) a = a.conjugate();
  return out;
}

namespace {

// z += x * y over the batch; raw loop keeps per-call overhead off the
// convolution inner loops
inline void axpy_prod(const cplx* __restrict x, const cplx* __restrict y,
                      cplx* __restrict z, Eigen::Index n) {
  const double* xr = reinterpret_cast<const double*>(x);
  const double* yr = reinterpret_cast<const double*>(y);
  double* zr = reinterpret_cast<double*>(z);
  for (Eigen::Index b = 0; b < n; ++b) {
    const double ar = xr[2 * b], ai = xr[2 * b + 1];
    const double br = yr[2 * b], bi = yr[2 * b + 1];
    zr[2 * b] += ar * br - ai * bi;
    zr[2 * b + 1] += ar * bi + ai * br;
  }
}

}  // namespace

Jet Jet::operator*(const Jet& o) const {
  if (!(spec_ == o.spec_)) {
    JetSpec s = JetSpec::lub(spec_, o.spec_);
    return promoted(s) * o.promoted(s);
  }
  Jet out(spec_, batch_);
  for (int i = 0; i < spec_.n0; ++i)
    for (int j = 0; j < spec_.n1; ++j)
      for (int k = 0; k < spec_.n2; ++k) {
        cplx* acc = out.c_[spec_.flat(i, j, k)].data();
        for (int i1 = 0; i1 <= i; ++i1)
          for (int j1 = 0; j1 <= j; ++j1)
            for (int k1 = 0; k1 <= k; ++k1)
              axpy_prod(c_[spec_.flat(i1, j1, k1)].data(),
                        o.c_[spec_.flat(i - i1, j - j1, k - k1)].data(), acc,
                        batch_);
      }
  return out;
}

Jet Jet::derivative(int d0, int d1, int d2, JetSpec out_spec) const {
  // coefficients beyond the stored extents are zero (collapsed variables)
  auto binom_fact = [](int n, int d) {
    // (n+d)! / n!
    double f = 1.0;
    for (int i = n + 1; i <= n + d; ++i) f *= i;
    return f;
  };
  Jet out(out_spec, batch_);
  for (int i = 0; i < out_spec.n0; ++i)
    for (int j = 0; j < out_spec.n1; ++j)
      for (int k = 0; k < out_spec.n2; ++k) {
        if (i + d0 >= spec_.n0 || j + d1 >= spec_.n1 || k + d2 >= spec_.n2)
          continue;
        const double f =
            binom_fact(i, d0) * binom_fact(j, d1) * binom_fact(k, d2);
        out.c_[out_spec.flat(i, j, k)] =
            c_[spec_.flat(i + d0, j + d1, k + d2)] * f;
      }
  return out;
}

Jet Jet::compose(const std::function<Arr(int)>& fderivs) const {
  const int P = spec_.total_order();
  // w = series part (constant term removed)
  Jet w = *this;
  w.c_[0] = Arr::Zero(batch_);
  std::vector<double> invfact(P + 1);
  invfact[0] = 1.0;
  for (int m = 1; m <= P; ++m) invfact[m] = invfact[m - 1] / m;
  Jet r = Jet::constant(spec_, Arr(fderivs(P) * invfact[P]));
  for (int m = P - 1; m >= 0; --m) {
    r = r * w;
    r.c_[0] += fderivs(m) * invfact[m];
  }
  return r;
}

Jet Jet::reciprocal() const {
  // direct series recurrence: one convolution-equivalent instead of a
  // Horner composition
  Jet out(spec_, batch_);
  Arr inv0 = c_[0].inverse();
  out.c_[0] = inv0;
  Arr acc(batch_);
  for (int total = 1; total <= spec_.total_order(); ++total)
    for (int i = 0; i < spec_.n0; ++i)
      for (int j = 0; j < spec_.n1; ++j)
        for (int k = 0; k < spec_.n2; ++k) {
          if (i + j + k != total) continue;
          acc.setZero();
          for (int i1 = 0; i1 <= i; ++i1)
            for (int j1 = 0; j1 <= j; ++j1)
              for (int k1 = 0; k1 <= k; ++k1) {
                if (i1 + j1 + k1 == 0) continue;
                axpy_prod(c_[spec_.flat(i1, j1, k1)].data(),
                          out.c_[spec_.flat(i - i1, j - j1, k - k1)].data(),
                          acc.data(), batch_);
              }
          out.c_[spec_.flat(i, j, k)] = -inv0 * acc;
        }
  return out;
}

Jet Jet::pow(double s) const {
  Arr u0 = c_[0];
  return compose([u0, s](int m) -> Arr {
    double f = 1.0;
    for (int i = 0; i < m; ++i) f *= (s - i);
    const double e = s - m;
    return f * u0.unaryExpr([e](cplx v) { return std::pow(v, e); });
  });
}

Jet Jet::exp() const {
  Arr e0 = c_[0].exp();
  return compose([e0](int) -> Arr { return e0; });
}

Jet Jet::sin() const {
  Arr s0 = c_[0].sin(), c0 = c_[0].cos();
  return compose([s0, c0](int m) -> Arr {
    switch (m % 4) {
      case 0: return s0;
      case 1: return c0;
      case 2: return -s0;
      default: return -c0;
    }
  });
}

Jet Jet::cos() const {
  Arr s0 = c_[0].sin(), c0 = c_[0].cos();
  return compose([s0, c0](int m) -> Arr {
    switch (m % 4) {
      case 0: return c0;
      case 1: return -s0;
      case 2: return -c0;
      default: return s0;
    }
  });
}

Jet Jet::log() const {
  Arr u0 = c_[0];
  return compose([u0](int m) -> Arr {
    if (m == 0) return u0.log();
    double f = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^(m-1) (m-1)!
    for (int i = 2; i < m; ++i) f *= i;
    return f * u0.unaryExpr([m](cplx v) { return std::pow(v, -m); });
  });
}

Jet Jet::arccos() const {
  // derivatives from (1-t^2) y'' - t y' = 0 via Leibniz:
  // (1-t^2) y^(m+2) = (2m+1) t y^(m+1) + m^2 y^(m)
  const int P = spec_.total_order();
  Arr t = c_[0].real().cast<cplx>();
  Arr one_m_t2 = (1.0 - t * t);
  std::vector<Arr> d(std::max(P + 1, 2));
  d[0] = t.acos();
  if (P >= 1) d[1] = -one_m_t2.pow(cplx(-0.5, 0.0));
  for (int m = 0; m + 2 <= P; ++m)
    d[m + 2] = ((2.0 * m + 1.0) * t * d[m + 1] + double(m) * double(m) * d[m]) /
               one_m_t2;
  return compose([d](int m) -> Arr { return d[m]; });
}

Jet Jet::arctan() const {
  // (1+t^2) y^(m+2) = -(2m+2) t y^(m+1) - m(m+1) y^(m)
  const int P = spec_.total_order();
  Arr t = c_[0].real().cast<cplx>();
  Arr one_p_t2 = (1.0 + t * t);
  std::vector<Arr> d(std::max(P + 1, 2));
  d[0] = t.real().atan().cast<cplx>();
  if (P >= 1) d[1] = one_p_t2.inverse();
  for (int m = 0; m + 2 <= P; ++m)
    d[m + 2] = (-(2.0 * m + 2.0) * t * d[m + 1] -
                double(m) * double(m + 1) * d[m]) /
               one_p_t2;
  return compose([d](int m) -> Arr { return d[m]; });
}

Jet Jet::polynomial(const std::vector<double>& coeffs) const {
  if (coeffs.empty()) return Jet(spec_, batch_);
  Jet r = Jet::constant(spec_, batch_, coeffs.back());
  for (int m = int(coeffs.size()) - 2; m >= 0; --m) {
    r = r * (*this);
    r.coeff(0, 0, 0) += Arr::Constant(batch_, coeffs[m]);
  }
  return r;
}

// ---------------------------------------------------------------------------

JetMat::JetMat(JetSpec s, int rows, int cols, Eigen::Index batch)
    : spec_(s), rows_(rows), cols_(cols), batch_(batch) {
  e_.assign(size_t(rows) * cols, Jet(s, batch));
}

JetMat JetMat::identity(JetSpec s, int n, Eigen::Index batch) {
  JetMat m(s, n, n, batch);
  for (int i = 0; i < n; ++i) m.at(i, i) = Jet::constant(s, batch, 1.0);
  return m;
}

JetMat JetMat::constant(JetSpec s, const Mat& value, Eigen::Index batch) {
  JetMat m(s, int(value.rows()), int(value.cols()), batch);
  for (int r = 0; r < value.rows(); ++r)
    for (int c = 0; c < value.cols(); ++c)
      m.at(r, c) = Jet::constant(s, batch, value(r, c));
  return m;
}

JetMat JetMat::from_scalar(const Jet& j) {
  JetMat m(j.spec(), 1, 1, j.batch());
  m.at(0, 0) = j;
  return m;
}

Mat JetMat::value(Eigen::Index b) const { return coeff(0, 0, 0, b); }

Mat JetMat::coeff(int i, int j, int k, Eigen::Index b) const {
  Mat m(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c).coeff(i, j, k)(b);
  return m;
}

JetMat JetMat::promoted(JetSpec s) const {
  if (spec_ == s) return *this;
  JetMat out(s, rows_, cols_, batch_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].promoted(s);
  return out;
}

JetMat JetMat::operator+(const JetMat& o) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  JetSpec s = JetSpec::lub(spec_, o.spec_);
  JetMat out(s, rows_, cols_, batch_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] + o.e_[i];
  return out;
}

JetMat JetMat::operator-(const JetMat& o) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  JetSpec s = JetSpec::lub(spec_, o.spec_);
  JetMat out(s, rows_, cols_, batch_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] - o.e_[i];
  return out;
}

JetMat JetMat::operator*(const JetMat& o) const {
  assert(cols_ == o.rows_);
  JetSpec s = JetSpec::lub(spec_, o.spec_);
  JetMat out(s, rows_, o.cols_, batch_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < o.cols_; ++c) {
      Jet acc(s, batch_);
      for (int m = 0; m < cols_; ++m) acc += at(r, m) * o.at(m, c);
      out.at(r, c) = acc;
    }
  return out;
}

JetMat JetMat::scaled(cplx f) const {
  JetMat out = *this;
  for (auto& j : out.e_) j = j.scaled(f);
  return out;
}

JetMat JetMat::mul_scalar(const Jet& s) const {
  JetMat out(JetSpec::lub(spec_, s.spec()), rows_, cols_, batch_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out.at(r, c) = at(r, c) * s;
  return out;
}

JetMat JetMat::conj_transpose() const {
  JetMat out(spec_, cols_, rows_, batch_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c).conjugated();
  return out;
}

JetMat JetMat::derivative(int d0, int d1, int d2, JetSpec out_spec) const {
  JetMat out(out_spec, rows_, cols_, batch_);
  for (size_t i = 0; i < e_.size(); ++i)
    out.e_[i] = e_[i].derivative(d0, d1, d2, out_spec);
  return out;
}

JetMat JetMat::inverse() const {
  assert(rows_ == cols_);
  const int n = rows_;
  if (n == 1) return from_scalar(at(0, 0).reciprocal());
  // batched coefficient recurrence B_m = -B0 sum_{0<u<=m} A_u B_{m-u},
  // with matrix entries held as arrays over the batch
  JetMat out(spec_, n, n, batch_);
  std::vector<Mat> inv0(batch_);
  for (Eigen::Index b = 0; b < batch_; ++b)
    inv0[b] = value(b).partialPivLu().inverse();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      Arr a(batch_);
      for (Eigen::Index b = 0; b < batch_; ++b) a(b) = inv0[b](r, c);
      out.at(r, c).coeff(0, 0, 0) = a;
    }
  std::vector<Arr> acc(size_t(n) * n, Arr(batch_));
  for (int total = 1; total <= spec_.total_order(); ++total) {
    for (int i = 0; i < spec_.n0; ++i)
      for (int j = 0; j < spec_.n1; ++j)
        for (int k = 0; k < spec_.n2; ++k) {
          if (i + j + k != total) continue;
          for (auto& a : acc) a.setZero();
          for (int i1 = 0; i1 <= i; ++i1)
            for (int j1 = 0; j1 <= j; ++j1)
              for (int k1 = 0; k1 <= k; ++k1) {
                if (i1 + j1 + k1 == 0) continue;
                for (int r = 0; r < n; ++r)
                  for (int c = 0; c < n; ++c)
                    for (int m = 0; m < n; ++m)
                      acc[size_t(r) * n + c] +=
                          at(r, m).coeff(i1, j1, k1) *
                          out.at(m, c).coeff(i - i1, j - j1, k - k1);
              }
          // multiply by -B0 per batch element
          for (Eigen::Index b = 0; b < batch_; ++b) {
            Mat am(n, n);
            for (int r = 0; r < n; ++r)
              for (int c = 0; c < n; ++c) am(r, c) = acc[size_t(r) * n + c](b);
            Mat bm = -inv0[b] * am;
            for (int r = 0; r < n; ++r)
              for (int c = 0; c < n; ++c)
                out.at(r, c).coeff(i, j, k)(b) = bm(r, c);
          }
        }
  }
  return out;
}

double JetMat::max_abs_value() const {
  double m = 0.0;
  for (const auto& j : e_) m = std::max(m, j.value().abs().maxCoeff());
  return m;
}

void JetMat::accumulate(const JetMat& o, cplx f) {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  const JetSpec& so = o.spec();
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      Jet& dst = at(r, c);
      const Jet& src = o.at(r, c);
      for (int i = 0; i < std::min(spec_.n0, so.n0); ++i)
        for (int j = 0; j < std::min(spec_.n1, so.n1); ++j)
          for (int k = 0; k < std::min(spec_.n2, so.n2); ++k)
            dst.coeff(i, j, k) += f * src.coeff(i, j, k);
    }
}

namespace {

inline void axpy_prod_scaled(const cplx* __restrict x, const cplx* __restrict y,
                             cplx* __restrict z, Eigen::Index n, cplx w) {
  const double wr = w.real(), wi = w.imag();
  const double* xr = reinterpret_cast<const double*>(x);
  const double* yr = reinterpret_cast<const double*>(y);
  double* zr = reinterpret_cast<double*>(z);
  for (Eigen::Index b = 0; b < n; ++b) {
    const double ar = xr[2 * b], ai = xr[2 * b + 1];
    const double br = yr[2 * b], bi = yr[2 * b + 1];
    const double pr = ar * br - ai * bi;
    const double pi = ar * bi + ai * br;
    zr[2 * b] += wr * pr - wi * pi;
    zr[2 * b + 1] += wr * pi + wi * pr;
  }
}

// (n+d)! / n!
inline double shift_weight(int n, int d) {
  double f = 1.0;
  for (int i = n + 1; i <= n + d; ++i) f *= i;
  return f;
}

}  // namespace

void accumulate_shifted_product(JetMat& out, const JetMat& A, int da,
                                const JetMat& B, int db, cplx coef) {
  const JetSpec& s = out.spec();
  const JetSpec& sa = A.spec();
  const JetSpec& sb = B.spec();
  const int rows = out.rows(), cols = out.cols(), mid = A.cols();
  const Eigen::Index batch = out.batch();
  for (int i = 0; i < s.n0; ++i)
    for (int j = 0; j < s.n1; ++j)
      for (int k = 0; k < s.n2; ++k)
        for (int i1 = 0; i1 <= i; ++i1) {
          if (i1 + da >= sa.n0 || i - i1 >= sb.n0) continue;
          for (int j1 = 0; j1 <= j; ++j1) {
            if (j1 >= sa.n1 || j - j1 + db >= sb.n1) continue;
            const double w = shift_weight(i1, da) * shift_weight(j - j1, db);
            const cplx cw = coef * w;
            for (int k1 = 0; k1 <= k; ++k1) {
              if (k1 >= sa.n2 || k - k1 >= sb.n2) continue;
              for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) {
                  cplx* dst = out.at(r, c).coeff(i, j, k).data();
                  for (int m = 0; m < mid; ++m)
                    axpy_prod_scaled(
                        A.at(r, m).coeff(i1 + da, j1, k1).data(),
                        B.at(m, c).coeff(i - i1, j - j1 + db, k - k1).data(),
                        dst, batch, cw);
                }
            }
          }
        }
}

void accumulate_shifted_adjoint(JetMat& out, const JetMat& A, int da,
                                cplx coef) {
  const JetSpec& s = out.spec();
  const JetSpec& sa = A.spec();
  const Eigen::Index batch = out.batch();
  for (int i = 0; i < s.n0; ++i) {
    if (i + da >= sa.n0) continue;
    for (int j = 0; j < s.n1; ++j) {
      if (j + da >= sa.n1) continue;
      const cplx cw = coef * shift_weight(i, da) * shift_weight(j, da);
      for (int k = 0; k < s.n2 && k < sa.n2; ++k)
        for (int r = 0; r < out.rows(); ++r)
          for (int c = 0; c < out.cols(); ++c) {
            Arr& dst = out.at(r, c).coeff(i, j, k);
            dst += cw * A.at(c, r).coeff(i + da, j + da, k).conjugate();
          }
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

// integer binomial, exact in double for the ranges used here
double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// coefficients of the degree-(2n+1) step polynomial on [0,1]
std::vector<double> step_coeffs() {
  const int n = kSmoothstepOrder;
  std::vector<double> c(2 * n + 2, 0.0);
  for (int k = 0; k <= n; ++k) {
    double v = binom(n + k, k) * binom(2 * n + 1, n - k);
    if (k % 2 == 1) v = -v;
    c[n + 1 + k] = v;
  }
  return c;
}

const std::vector<double>& step_poly() {
  static const std::vector<double> c = step_coeffs();
  return c;
}

}  // namespace

double smoothstep(double t) {
  // the monomial form cancels badly near t = 1; reflect into [0, 1/2]
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (t > 0.5) return 1.0 - smoothstep(1.0 - t);
  const auto& c = step_poly();
  double r = 0.0;
  for (int m = int(c.size()) - 1; m >= 0; --m) r = r * t + c[m];
  return r;
}

Jet smoothstep(const Jet& t) {
  const Eigen::Index batch = t.batch();
  const Arr& t0c = t.value();
  const double lo0 = t0c.real().minCoeff(), hi0 = t0c.real().maxCoeff();
  // batch-uniform regions take a single branch (the common case: the
  // argument depends only on xi, which is constant over the batch)
  if (hi0 <= 0.0) return Jet(t.spec(), batch);
  if (lo0 >= 1.0) {
    Jet out(t.spec(), batch);
    out.coeff(0, 0, 0) = Arr::Constant(batch, cplx(1.0, 0.0));
    return out;
  }
  auto lower_branch = [&] { return t.polynomial(step_poly()); };
  auto upper_branch = [&] {
    Jet refl = -t;
    refl.coeff(0, 0, 0) += Arr::Constant(batch, cplx(1.0, 0.0));
    Jet u = -refl.polynomial(step_poly());
    u.coeff(0, 0, 0) += Arr::Constant(batch, cplx(1.0, 0.0));
    return u;
  };
  if (lo0 > 0.0 && hi0 <= 0.5) return lower_branch();
  if (lo0 > 0.5 && hi0 < 1.0) return upper_branch();
  // mixed regions: blend per batch element
  Jet lower = lower_branch();
  Jet upper = upper_branch();
  Jet out = lower;
  const JetSpec s = t.spec();
  for (int i = 0; i < s.n0; ++i)
    for (int j = 0; j < s.n1; ++j)
      for (int k = 0; k < s.n2; ++k) {
        Arr& a = out.coeff(i, j, k);
        const bool is_value = (i == 0 && j == 0 && k == 0);
        Arr lo = Arr::Zero(batch);
        Arr hi = is_value ? Arr::Constant(batch, cplx(1.0, 0.0))
                          : Arr::Zero(batch);
        a = (t0c.real() > 0.5).select(upper.coeff(i, j, k), a);
        a = (t0c.real() <= 0.0).select(lo, a);
        a = (t0c.real() >= 1.0).select(hi, a);
      }
  return out;
}

double excision(double xi, double radius) {
  return smoothstep(2.0 * std::abs(xi) / radius - 1.0);
}

Jet excision_jet(const Jet& xi, double radius) {
  // even in xi; the transition pieces are disjoint from xi = 0
  const double x0 = xi.value()(0).real();
  Jet arg = (x0 >= 0.0) ? xi.scaled(2.0 / radius) : xi.scaled(-2.0 / radius);
  arg.coeff(0, 0, 0) -= Arr::Constant(xi.batch(), cplx(1.0, 0.0));
  return smoothstep(arg);
}

}  // namespace psdo
