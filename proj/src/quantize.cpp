#include "psdo/quantize.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "nlohmann/json.hpp"
#include "psdo/parallel.hpp"

namespace psdo {

namespace {

using nlohmann::json;

// one column block: Fourier coefficients in x of a(., k, lambda)
void fill_column(const SymbolPtr& a, const Lambda& lam, const CircleGrid& g,
                 int k, Mat& out) {
  const int K = g.K;
  if (!a->dep_x()) {
    // block-diagonal by construction; no transform, exact 0/1 multipliers stay exact
    Mat v = a->value(0.0, double(k), lam.tau, lam.theta);
    out.block((k + K) * g.N1, (k + K) * g.N0, g.N1, g.N0) = v;
    return;
  }
  const auto xs = g.x_points();
  ArrR xb = Eigen::Map<const ArrR>(xs.data(), xs.size());
  EvalPoint p{xb, double(k), lam.tau, lam.theta};
  JetMat vals = eval_jet_once(a, p, JetSpec{1, 1, 1});
  const cplx iunit(0.0, 1.0);
  for (int kp = -K; kp <= K; ++kp) {
    const double m = double(kp - k);
    Mat c = Mat::Zero(g.N1, g.N0);
    Arr ph = (-iunit * m * xb.cast<cplx>()).exp();
    for (int r = 0; r < g.N1; ++r)
      for (int cc = 0; cc < g.N0; ++cc)
        c(r, cc) = (vals.at(r, cc).value() * ph).sum() / double(g.n_x);
    out.block((kp + K) * g.N1, (k + K) * g.N0, g.N1, g.N0) = c;
  }
}

TruncatedOperator quantize_impl(const SymbolPtr& a, const Lambda& lam,
                                const CircleGrid& g, bool parallel) {
  g.validate();
  if (a->rows() != g.N1 || a->cols() != g.N0)
    fail(Err::ShapeMismatch, "symbol shape does not match grid fibers");
  TruncatedOperator T;
  T.lambda = lam;
  T.K = g.K;
  T.N0 = g.N0;
  T.N1 = g.N1;
  T.matrix = Mat::Zero(T.dim_rows(), T.dim_cols());
  const std::size_t n = 2 * g.K + 1;
  auto work = [&](std::size_t i) {
    fill_column(a, lam, g, int(i) - g.K, T.matrix);
  };
  if (parallel)
    par::for_index(n, work);
  else
    par::for_index_serial(n, work);
  return T;
}

void check_same_lambda(const TruncatedOperator& A, const TruncatedOperator& B) {
  if (std::abs(A.lambda.tau - B.lambda.tau) > 1e-12 ||
      std::abs(A.lambda.theta - B.lambda.theta) > 1e-12)
    fail(Err::LambdaMismatch, "operands live at different lambda");
}

Eigen::VectorXd sobolev_weights(int K, int N, double r) {
  Eigen::VectorXd w((2 * K + 1) * N);
  for (int k = -K; k <= K; ++k) {
    const double b = std::pow(japanese_bracket(double(k)), r);
    for (int j = 0; j < N; ++j) w((k + K) * N + j) = b;
  }
  return w;
}

}  // namespace

TruncatedOperator quantize(const SymbolPtr& a, const Lambda& lambda,
                           const CircleGrid& grid) {
  return quantize_impl(a, lambda, grid, true);
}

TruncatedOperator quantize_serial(const SymbolPtr& a, const Lambda& lambda,
                                  const CircleGrid& grid) {
  return quantize_impl(a, lambda, grid, false);
}

double sobolev_opnorm(const TruncatedOperator& T, double s, double t) {
  Eigen::VectorXd wt = sobolev_weights(T.K, T.N1, t);
  Eigen::VectorXd ws = sobolev_weights(T.K, T.N0, -s);
  Mat M = wt.asDiagonal() * T.matrix * ws.asDiagonal();
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

TruncatedOperator oracle_compose(const TruncatedOperator& A,
                                 const TruncatedOperator& B) {
  check_same_lambda(A, B);
  if (A.N0 != B.N1 || A.K != B.K)
    fail(Err::ShapeMismatch, "composition shapes do not match");
  TruncatedOperator C;
  C.lambda = A.lambda;
  C.K = A.K;
  C.N0 = B.N0;
  C.N1 = A.N1;
  C.sobolev_s = B.sobolev_s;
  C.matrix = A.matrix * B.matrix;
  return C;
}

TruncatedOperator oracle_invert(const TruncatedOperator& T,
                                const Regularizer& reg, ConditionReport* rep) {
  if (T.dim_rows() != T.dim_cols())
    fail(Err::ShapeMismatch, "inverse of a non-square operator");
  Eigen::JacobiSVD<Mat> svd(T.matrix,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (rep) {
    rep->sigma_max = smax;
    rep->sigma_min = smin;
    rep->condition = smin > 0.0 ? smax / smin : INFINITY;
    rep->regularized = reg.tikhonov;
  }
  TruncatedOperator R = T;
  if (!reg.tikhonov) {
    if (smin < 1e-12 * smax)
      fail(Err::SingularToTolerance,
           "smallest singular value below 1e-12 of the largest");
    R.matrix = T.matrix.partialPivLu().inverse();
  } else {
    // (T^H T + eps I)^{-1} T^H
    Mat TH = T.matrix.adjoint();
    Mat G = TH * T.matrix;
    G.diagonal().array() += reg.eps;
    R.matrix = G.ldlt().solve(TH);
  }
  std::swap(R.N0, R.N1);
  return R;
}

TruncatedOperator truncated_identity(int K, int N, const Lambda& lambda) {
  TruncatedOperator I;
  I.lambda = lambda;
  I.K = K;
  I.N0 = I.N1 = N;
  I.matrix = Mat::Identity((2 * K + 1) * N, (2 * K + 1) * N);
  return I;
}

double interior_band_error(const TruncatedOperator& A,
                           const TruncatedOperator& B, double s,
                           bool annulus) {
  check_same_lambda(A, B);
  if (A.K != B.K || A.N0 != B.N0 || A.N1 != B.N1)
    fail(Err::ShapeMismatch, "operands of different layout");
  const int K = A.K;
  std::vector<int> keep;
  for (int k = -K; k <= K; ++k) {
    const int ak = std::abs(k);
    if (ak > K / 2) continue;
    if (annulus && ak < K / 4) continue;
    keep.push_back(k);
  }
  auto gather = [&](const Mat& M, int N0, int N1) {
    Mat out(int(keep.size()) * N1, int(keep.size()) * N0);
    for (size_t i = 0; i < keep.size(); ++i)
      for (size_t j = 0; j < keep.size(); ++j)
        out.block(int(i) * N1, int(j) * N0, N1, N0) =
            M.block((keep[i] + K) * N1, (keep[j] + K) * N0, N1, N0);
    return out;
  };
  Mat D = gather(A.matrix - B.matrix, A.N0, A.N1);
  if (s != 0.0) {
    Eigen::VectorXd wr(int(keep.size()) * A.N1), wc(int(keep.size()) * A.N0);
    for (size_t i = 0; i < keep.size(); ++i) {
      const double b = std::pow(japanese_bracket(double(keep[i])), s);
      for (int j = 0; j < A.N1; ++j) wr(int(i) * A.N1 + j) = b;
      for (int j = 0; j < A.N0; ++j) wc(int(i) * A.N0 + j) = 1.0 / b;
    }
    D = wr.asDiagonal() * D * wc.asDiagonal();
  }
  Eigen::JacobiSVD<Mat> svd(D);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// --- smoothing families -----------------------------------------------------

SmoothingKernel encode_smoothing(std::vector<Lambda> lambdas,
                                 std::vector<Mat> matrices, int K, int N0,
                                 int N1) {
  if (lambdas.size() != matrices.size() || lambdas.empty())
    fail(Err::ShapeMismatch, "family sizes disagree");
  for (const auto& m : matrices)
    if (m.rows() != matrices[0].rows() || m.cols() != matrices[0].cols())
      fail(Err::ShapeMismatch, "inconsistent family shapes");
  auto data = std::make_shared<OperatorFamilyData>();
  data->lambdas = std::move(lambdas);
  data->matrices = std::move(matrices);
  data->K = K;
  data->N0 = N0;
  data->N1 = N1;
  SmoothingKernel k;
  k.data = data;
  for (int m = 0; m <= 3; ++m) {
    double sup = 0.0;
    for (size_t i = 0; i < data->lambdas.size(); ++i) {
      const double tb = japanese_bracket(data->lambdas[i].tau);
      sup = std::max(sup, std::pow(tb, m) * data->matrices[i].operatorNorm());
    }
    k.decay_certificate[size_t(m)] = sup;
  }
  // vanishing iff the weighted m=1 certificate is finite and the norms trend
  // down over the top decade of tau
  double tau_max = 0.0;
  for (const auto& l : data->lambdas) tau_max = std::max(tau_max, l.tau);
  double lo = 0.0, hi = 0.0;
  for (size_t i = 0; i < data->lambdas.size(); ++i) {
    const double n = data->matrices[i].operatorNorm();
    if (data->lambdas[i].tau <= 0.1 * tau_max + 1e-30)
      lo = std::max(lo, n);
    else
      hi = std::max(hi, n);
  }
  k.vanishing_at_infinity =
      std::isfinite(k.decay_certificate[1]) && (hi < lo || (hi == 0.0 && lo == 0.0));
  return k;
}

SymbolPtr smoothing_symbol(const SmoothingKernel& k) {
  return operator_family_symbol(k.data, k.vanishing_at_infinity, -1e9);
}

// --- export -----------------------------------------------------------------

namespace {
const char* b64_chars =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const unsigned char* data, size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (size_t i = 0; i < len; i += 3) {
    unsigned v = data[i] << 16;
    if (i + 1 < len) v |= data[i + 1] << 8;
    if (i + 2 < len) v |= data[i + 2];
    out.push_back(b64_chars[(v >> 18) & 63]);
    out.push_back(b64_chars[(v >> 12) & 63]);
    out.push_back(i + 1 < len ? b64_chars[(v >> 6) & 63] : '=');
    out.push_back(i + 2 < len ? b64_chars[v & 63] : '=');
  }
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<unsigned char> out;
  int buf = 0, bits = 0;
  for (char c : text) {
    const int v = val(c);
    if (v < 0) continue;
    buf = (buf << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back((unsigned char)((buf >> bits) & 0xff));
    }
  }
  return out;
}

std::string export_operator_json(const TruncatedOperator& T) {
  json j;
  j["shape"] = {T.dim_rows(), T.dim_cols()};
  j["lambda"] = {{"tau", T.lambda.tau}, {"theta", T.lambda.theta}};
  j["K"] = T.K;
  j["fibers"] = {T.N0, T.N1};
  j["sobolev_s"] = T.sobolev_s;
  j["layout"] = "complex-double little-endian column-major";
  // Eigen matrices are column-major; dump the raw buffer
  const auto* raw = reinterpret_cast<const unsigned char*>(T.matrix.data());
  j["payload"] = base64_encode(raw, sizeof(cplx) * size_t(T.matrix.size()));
  return j.dump();
}

TruncatedOperator import_operator_json(const std::string& text) {
  json j = json::parse(text);
  TruncatedOperator T;
  T.K = j.at("K").get<int>();
  T.N0 = j.at("fibers")[0].get<int>();
  T.N1 = j.at("fibers")[1].get<int>();
  T.lambda.tau = j.at("lambda").at("tau").get<double>();
  T.lambda.theta = j.at("lambda").at("theta").get<double>();
  T.sobolev_s = j.value("sobolev_s", 0.0);
  const int r = j.at("shape")[0].get<int>(), c = j.at("shape")[1].get<int>();
  auto bytes = base64_decode(j.at("payload").get<std::string>());
  if (bytes.size() != sizeof(cplx) * size_t(r) * size_t(c))
    fail(Err::ConfigInvalid, "payload size does not match shape");
  T.matrix = Mat(r, c);
  std::memcpy(T.matrix.data(), bytes.data(), bytes.size());
  return T;
}

}  // namespace psdo
