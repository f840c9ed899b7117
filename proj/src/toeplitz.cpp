#include "psdo/toeplitz.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "psdo/catalog.hpp"
#include "psdo/fit.hpp"
#include "psdo/parallel.hpp"
#include "psdo/taylor.hpp"

namespace psdo {

namespace {

double min_sv(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 1e300;  // trivial fibers pass
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Mat fiber_range_basis(const Mat& p, double tol = 1e-10) {
  Eigen::ColPivHouseholderQR<Mat> qr(p);
  qr.setThreshold(tol);
  const int r = int(qr.rank());
  Mat Q = qr.householderQ() * Mat::Identity(p.rows(), r);
  return Q;
}

// value of the principal polar datum; projections are rho-independent
Mat principal_at(const ProjectionSymbol& P, double x, int phi, double theta) {
  return P.p->principal()->eval_polar_value(x, phi, 0.7, theta);
}

bool in_sector(cplx z, double theta_min, double theta_max, double pad = 0.0) {
  if (std::abs(z) == 0.0) return true;  // the origin lies on every ray
  double arg = std::arg(z);
  if (arg < 0.0) arg += 2.0 * M_PI;
  return arg >= theta_min - pad && arg <= theta_max + pad;
}

}  // namespace

Mat range_basis(const Mat& projection_matrix) {
  return fiber_range_basis(projection_matrix);
}

double restricted_sobolev_norm(const Mat& M, const Mat& Q, int K, int N,
                               double s, double t) {
  Eigen::VectorXd ws((2 * K + 1) * N), wt((2 * K + 1) * N);
  for (int k = -K; k <= K; ++k)
    for (int j = 0; j < N; ++j) {
      ws((k + K) * N + j) = std::pow(japanese_bracket(double(k)), s);
      wt((k + K) * N + j) = std::pow(japanese_bracket(double(k)), t);
    }
  // orthonormalize D_s Q, then measure D_t M D_s^{-1} on that subspace
  Mat W = ws.asDiagonal() * Q;
  Eigen::HouseholderQR<Mat> qr(W);
  Mat QW = qr.householderQ() * Mat::Identity(W.rows(), W.cols());
  Mat rest = wt.asDiagonal() * M *
             (ws.cwiseInverse()).asDiagonal() * QW;
  Eigen::JacobiSVD<Mat> svd(rest);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

ProjectionSymbol make_hardy_projection(int K) {
  if (K < 1) fail(Err::ConfigInvalid, "need K >= 1");
  ProjectionSymbol P;
  P.p = hardy_multiplier_symbol();
  P.exact = true;
  P.range_rank_profile = {1, 0};
  return P;
}

ProjectionSymbol make_rotated_projection() {
  ProjectionSymbol P;
  P.p = rotated_projection_symbol();
  P.exact = false;  // x-dependent: idempotence holds to truncation accuracy
  P.range_rank_profile = {1, 1};
  return P;
}

ProjectionSymbol make_identity_projection(int fibers) {
  ProjectionSymbol P;
  P.p = constant_symbol(Mat::Identity(fibers, fibers));
  P.exact = true;
  P.range_rank_profile = {fibers, fibers};
  return P;
}

ProjectionSymbol make_projection(SymbolPtr p) {
  ProjectionSymbol P;
  P.p = std::move(p);
  P.exact = false;
  if (P.p->principal()) {
    for (int i = 0; i < 2; ++i) {
      const int phi = i == 0 ? 1 : -1;
      Mat v = principal_at(P, 0.3, phi, 0.0);
      Eigen::ColPivHouseholderQR<Mat> qr(v);
      qr.setThreshold(1e-10);
      P.range_rank_profile[size_t(i)] = int(qr.rank());
    }
  }
  return P;
}

OrderReductionPair make_order_reduction(double mu) {
  if (mu <= 0.0) fail(Err::ConfigInvalid, "order reduction needs mu > 0");
  OrderReductionPair rs;
  rs.R = param_bessel_symbol(-mu);
  rs.S = param_bessel_symbol(mu);
  rs.mu = mu;
  return rs;
}

namespace {

// scalar multiplier as a diagonal matrix symbol, so shapes compose
SymbolPtr diag_embed(const SymbolPtr& scalar, int n) {
  if (n == 1) return scalar;
  return pointwise_scalar_product(scalar,
                                  constant_symbol(Mat::Identity(n, n)));
}

}  // namespace

ProjectionSymbol tilde_conjugate(const ProjectionSymbol& P,
                                 const OrderReductionPair& RS) {
  if (P.p->rows() != P.p->cols())
    fail(Err::ShapeMismatch, "projection must be square");
  ProjectionSymbol out;
  if (!P.p->dep_x()) {
    // multipliers commute pointwise: R P S = P exactly
    out = P;
    return out;
  }
  const int N = 3;
  const int n = P.p->rows();
  SymbolPtr left = leibniz_node(diag_embed(RS.R, n), P.p, N);
  out.p = leibniz_node(left, diag_embed(RS.S, n), N);
  out.exact = false;
  out.range_rank_profile = P.range_rank_profile;
  return out;
}

ToeplitzOperator compress_toeplitz(const SymbolPtr& A,
                                   const ProjectionSymbol& P0,
                                   const ProjectionSymbol& P1,
                                   const ParameterStrip& strip,
                                   const CircleGrid& grid) {
  ToeplitzOperator T;
  T.A = A;
  T.P0 = P0;
  T.P1 = P1;
  T.lambdas = sample_lambda(strip);
  T.compressed.resize(T.lambdas.size());
  T.basis0.resize(T.lambdas.size());
  T.basis1.resize(T.lambdas.size());
  CircleGrid g0 = grid;
  g0.N0 = g0.N1 = A->cols();
  CircleGrid g1 = grid;
  g1.N0 = g1.N1 = A->rows();
  CircleGrid ga = grid;
  ga.N0 = A->cols();
  ga.N1 = A->rows();
  par::for_index(T.lambdas.size(), [&](std::size_t i) {
    const Lambda lam = T.lambdas[i];
    Mat p0 = quantize_serial(P0.p, lam, g0).matrix;
    Mat p1 = quantize_serial(P1.p, lam, g1).matrix;
    Mat a = quantize_serial(A, lam, ga).matrix;
    T.basis0[i] = fiber_range_basis(p0);
    T.basis1[i] = fiber_range_basis(p1);
    T.compressed[i] =
        T.basis1[i].adjoint() * (p1 * a * p0) * T.basis0[i];
  });
  return T;
}

EllipticityReport toeplitz_ellipticity(const SymbolPtr& A,
                                       const ProjectionSymbol& P0,
                                       const ProjectionSymbol& P1,
                                       const ParameterStrip& strip,
                                       const CircleGrid& grid,
                                       const EllipticityOptions& opt) {
  if (!A->principal()) fail(Err::NoPrincipalData, "no principal data");
  if (!P0.p->principal() || !P1.p->principal())
    fail(Err::NoPrincipalData, "projection without principal data");
  EllipticityReport rep;
  auto hc = A->principal();
  const auto xs = grid.x_points();
  std::vector<double> rhos =
      linear_spaced(opt.rho_min, M_PI / 2.0, opt.rho_samples);

  // (1): compressed principal between the projected ranges
  bool pass1 = true;
  Witness wit;
  for (int phi : {1, -1}) {
    for (double x : xs) {
      Mat p0 = principal_at(P0, x, phi, strip.theta_samples.front());
      Mat p1 = principal_at(P1, x, phi, strip.theta_samples.front());
      Mat b0 = fiber_range_basis(p0);
      Mat b1 = fiber_range_basis(p1);
      if (b0.cols() != b1.cols())
        fail(Err::RankMismatch,
             "range ranks differ at a cosphere point; compression cannot be "
             "bijective");
      if (b0.cols() == 0) continue;  // trivial fibers
      for (double rho : rhos)
        for (double theta : strip.theta_samples) {
          Mat av = hc->eval_polar_value(x, phi, rho, theta);
          Mat c = b1.adjoint() * (p1 * av * p0) * b0;
          const double sv = min_sv(c);
          if (sv < opt.sv_threshold &&
              (pass1 || sv < wit.min_singular_value)) {
            wit.kind = Witness::Polar;
            wit.x = x;
            wit.phi = phi;
            wit.rho = rho;
            wit.theta = theta;
            wit.min_singular_value = sv;
            pass1 = false;
          }
        }
    }
  }
  if (!pass1) {
    auto sv_at = [&](double rho, double theta) {
      Mat p0 = principal_at(P0, wit.x, wit.phi, theta);
      Mat p1 = principal_at(P1, wit.x, wit.phi, theta);
      Mat b0 = fiber_range_basis(p0), b1 = fiber_range_basis(p1);
      Mat av = hc->eval_polar_value(wit.x, wit.phi, rho, theta);
      return min_sv(b1.adjoint() * (p1 * av * p0) * b0);
    };
    for (int round = 0; round < 3; ++round) {
      const double r0 = wit.rho, t0 = wit.theta;
      // golden-section refinement in each coordinate
      auto refine = [&](auto f, double lo, double hi) {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        for (int i = 0; i < 48; ++i) {
          if (fc < fd) {
            b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
          } else {
            a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
          }
        }
        return fc < fd ? c : d;
      };
      wit.rho = refine([&](double r) { return sv_at(r, wit.theta); },
                       std::max(opt.rho_min, r0 - 0.3),
                       std::min(M_PI / 2.0, r0 + 0.3));
      wit.theta = refine([&](double t) { return sv_at(wit.rho, t); },
                         std::max(strip.theta_min, t0 - 0.3),
                         std::min(strip.theta_max, t0 + 0.3));
    }
    wit.min_singular_value = sv_at(wit.rho, wit.theta);
    rep.witness = wit;
  }
  rep.verdicts["T1-principal"] = pass1;

  // (2): compressed restriction at the pole between the cosphere ranges
  bool pass2 = true;
  for (int phi : {1, -1})
    for (double x : xs)
      for (double theta : strip.theta_samples) {
        Mat p0 = principal_at(P0, x, phi, theta);
        Mat p1 = principal_at(P1, x, phi, theta);
        Mat b0 = fiber_range_basis(p0), b1 = fiber_range_basis(p1);
        if (b0.cols() != b1.cols()) {
          pass2 = false;
          continue;
        }
        if (b0.cols() == 0) continue;
        Mat av = hc->eval_polar_value(x, phi, 0.0, theta);
        const double sv = min_sv(b1.adjoint() * (p1 * av * p0) * b0);
        if (sv < opt.sv_threshold) pass2 = false;
      }
  rep.verdicts["T2-angular"] = pass2;

  // (3): the L2-level compressed map with the doubling certificate
  auto pole_symbol = [&]() -> SymbolPtr {
    auto base = hc;
    GeneratorConfig cfg;
    cfg.name = "principal-at-pole";
    cfg.kind = SymbolKind::FixedSymbol;
    cfg.order = 0.0;
    cfg.rows = hc->rows;
    cfg.cols = hc->cols;
    cfg.dep_x = true;
    cfg.dep_xi = false;
    cfg.eval = [base](const EvalPoint& p, JetSpec s) {
      return base->polar(PolarPoint{p.x, 1, 0.0, p.theta},
                         JetSpec{1, s.n1, 1})
          .promoted(s);
    };
    return make_generator(cfg);
  }();
  double svK = 1e300, sv2K = 1e300;
  for (double theta : strip.theta_samples) {
    Lambda lam{0.0, theta};
    for (int scale : {1, 2}) {
      CircleGrid gq = CircleGrid::make(opt.sigma3_K * scale, hc->cols,
                                       hc->rows);
      CircleGrid gp0 = gq;
      gp0.N0 = gp0.N1 = hc->cols;
      CircleGrid gp1 = gq;
      gp1.N0 = gp1.N1 = hc->rows;
      Mat p0 = quantize(P0.p, lam, gp0).matrix;
      Mat p1 = quantize(P1.p, lam, gp1).matrix;
      Mat m = quantize(pole_symbol, lam, gq).matrix;
      Mat b0 = fiber_range_basis(p0), b1 = fiber_range_basis(p1);
      if (b0.cols() != b1.cols()) {
        (scale == 1 ? svK : sv2K) = 0.0;
        continue;
      }
      const double sv = min_sv(b1.adjoint() * (p1 * m * p0) * b0);
      (scale == 1 ? svK : sv2K) = std::min(scale == 1 ? svK : sv2K, sv);
    }
  }
  rep.sigma3.K = opt.sigma3_K;
  rep.sigma3.sv_K = svK;
  rep.sigma3.sv_2K = sv2K;
  rep.sigma3.drift = std::abs(svK - sv2K) / std::max({svK, sv2K, 1e-300});
  rep.sigma3.pass = svK >= opt.sv_threshold && sv2K >= opt.sv_threshold &&
                    rep.sigma3.drift < 0.10;
  rep.verdicts["T3-limit"] = rep.sigma3.pass;
  return rep;
}

ToeplitzParametrix toeplitz_parametrix(const SymbolPtr& A,
                                       const ProjectionSymbol& P0,
                                       const ProjectionSymbol& P1,
                                       const OrderReductionPair& RS,
                                       const ParameterStrip& strip,
                                       const CircleGrid& grid,
                                       const EllipticityOptions& opt) {
  // reduced symbol must be toeplitz-elliptic
  SymbolPtr At = leibniz_node(RS.R, A, opt.leibniz_N);
  auto report = toeplitz_ellipticity(At, P0, tilde_conjugate(P1, RS), strip,
                                     grid, opt);
  if (!report.pass()) {
    std::string which;
    for (const auto& [k, v] : report.verdicts)
      if (!v) which += (which.empty() ? "" : ", ") + k;
    fail(Err::EllipticityFailed, "toeplitz conditions failed: " + which);
  }

  ToeplitzParametrix out;
  const auto lambdas = sample_lambda(strip);
  const size_t n = lambdas.size();
  out.parametrix.P0 = P1;  // the parametrix runs range(P1) -> range(P0)
  out.parametrix.P1 = P0;
  out.parametrix.lambdas = lambdas;
  out.parametrix.compressed.resize(n);
  out.parametrix.basis0.resize(n);
  out.parametrix.basis1.resize(n);
  out.residual_left.resize(n);
  out.residual_right.resize(n);
  out.chain_residual.resize(n);
  out.full_inverse.resize(n);

  CircleGrid g0 = grid;
  g0.N0 = g0.N1 = A->cols();
  CircleGrid g1 = grid;
  g1.N0 = g1.N1 = A->rows();
  CircleGrid ga = grid;
  ga.N0 = A->cols();
  ga.N1 = A->rows();

  std::vector<double> invertibility(n, 0.0);
  par::for_index(n, [&](std::size_t i) {
    const Lambda lam = lambdas[i];
    Mat Rm = quantize_serial(RS.R, lam, g1).matrix;
    Mat Sm = quantize_serial(RS.S, lam, g1).matrix;
    Mat p0 = quantize_serial(P0.p, lam, g0).matrix;
    Mat p1 = quantize_serial(P1.p, lam, g1).matrix;
    Mat a = quantize_serial(A, lam, ga).matrix;
    Mat pt1 = Rm * p1 * Sm;  // exactly idempotent: S R = 1 on the grid
    Mat At_m = Rm * a;
    Mat Tt = pt1 * At_m * p0;
    Mat Q0 = fiber_range_basis(p0);
    Mat Qt1 = fiber_range_basis(pt1);
    out.chain_residual[i] = (Sm * pt1 * Rm - p1).operatorNorm();
    if (Q0.cols() != Qt1.cols()) {
      invertibility[i] = 0.0;
      out.residual_left[i] = out.residual_right[i] = 1e300;
      return;
    }
    Mat C = Qt1.adjoint() * Tt * Q0;
    Eigen::JacobiSVD<Mat> svd(C);
    const auto& sv = svd.singularValues();
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    const double smax = sv.size() ? sv(0) : 0.0;
    invertibility[i] = smax > 0.0 ? smin / smax : 0.0;
    if (smin < 1e-12 * std::max(smax, 1e-300)) {
      out.residual_left[i] = out.residual_right[i] = 1e300;
      return;
    }
    Mat Binner = Q0 * C.partialPivLu().solve(Qt1.adjoint() * pt1);
    Mat Bfull = Binner * Rm;
    Mat Aprime = p1 * a * p0;
    out.residual_left[i] = (Bfull * Aprime - p0).operatorNorm();
    out.residual_right[i] = (Aprime * Bfull - p1).operatorNorm();
    out.full_inverse[i] = Bfull;
    Mat Q1 = fiber_range_basis(p1);
    out.parametrix.basis0[i] = Q1;
    out.parametrix.basis1[i] = Q0;
    out.parametrix.compressed[i] = Q0.adjoint() * Bfull * Q1;
  });

  // thresholds: first grid tau with exact residuals up the ray
  out.tau_threshold_per_theta.assign(strip.theta_samples.size(), -1.0);
  for (size_t ti = 0; ti < strip.theta_samples.size(); ++ti) {
    for (size_t q = 0; q < strip.tau_samples.size(); ++q) {
      bool ok = true;
      for (size_t q2 = q; q2 < strip.tau_samples.size(); ++q2) {
        const size_t idx = q2 * strip.theta_samples.size() + ti;
        ok = ok && out.residual_left[idx] <= 1e-8 &&
             out.residual_right[idx] <= 1e-8;
      }
      if (ok) {
        out.tau_threshold_per_theta[ti] = strip.tau_samples[q];
        break;
      }
    }
    if (out.tau_threshold_per_theta[ti] < 0.0)
      fail(Err::NeverSmall, "no tau threshold on some ray");
  }
  out.tau_threshold = *std::max_element(out.tau_threshold_per_theta.begin(),
                                        out.tau_threshold_per_theta.end());
  // family-backed symbol for the parametrix slot
  auto data = std::make_shared<OperatorFamilyData>();
  data->lambdas = lambdas;
  data->matrices = out.full_inverse;
  data->K = grid.K;
  data->N0 = A->rows();
  data->N1 = A->cols();
  out.parametrix.A = operator_family_symbol(data, false, -A->order());
  return out;
}

SpectralHypothesisReport check_spectral_hypothesis(const SymbolPtr& A_fixed,
                                                   int mu,
                                                   const ProjectionSymbol& P,
                                                   const ParameterStrip& strip,
                                                   const CircleGrid& grid,
                                                   double sv_threshold) {
  if (!A_fixed->principal()) fail(Err::NoPrincipalData, "no principal data");
  SpectralHypothesisReport rep;
  rep.pass = true;
  auto hc = A_fixed->principal();
  for (int phi : {1, -1})
    for (double x : grid.x_points()) {
      Mat p = principal_at(P, x, phi, strip.theta_samples.front());
      Mat b = fiber_range_basis(p);
      if (b.cols() == 0) continue;
      // fixed-symbol principal on the cosphere: rho = pi/2 hits |xi| = 1
      Mat av = hc->eval_polar_value(x, phi, M_PI / 2.0, 0.0);
      Mat C = b.adjoint() * (p * av * p) * b;
      Eigen::ComplexEigenSolver<Mat> eig(C);
      for (int j = 0; j < eig.eigenvalues().size(); ++j) {
        const cplx z = eig.eigenvalues()(j);
        if (in_sector(z, strip.theta_min, strip.theta_max)) {
          rep.pass = false;
          Witness w;
          w.kind = Witness::Cartesian;
          w.x = x;
          w.xi = double(phi);
          w.tau = std::pow(std::abs(z), 1.0 / double(mu));
          w.theta = std::arg(z) < 0.0 ? std::arg(z) + 2.0 * M_PI : std::arg(z);
          // re-evaluate the compressed symbol at the witness direction
          Mat probe = std::pow(w.tau, double(mu)) *
                          std::exp(cplx(0.0, w.theta)) *
                          Mat::Identity(C.rows(), C.cols()) -
                      C;
          w.min_singular_value = min_sv(probe);
          if (!rep.witness ||
              w.min_singular_value < rep.witness->min_singular_value)
            rep.witness = w;
        }
      }
    }
  (void)sv_threshold;
  return rep;
}

ResolventRecord resolvent_pipeline(const SymbolPtr& A_fixed, int mu,
                                   const ProjectionSymbol& P,
                                   const ParameterStrip& strip,
                                   const CircleGrid& grid, double sobolev_s,
                                   const EllipticityOptions& opt) {
  if (mu < 1) fail(Err::ConfigInvalid, "order mu must be a positive integer");
  auto hyp = check_spectral_hypothesis(A_fixed, mu, P, strip, grid);
  if (!hyp.pass) {
    std::string msg = "compressed principal symbol has spectrum in the sector";
    if (hyp.witness)
      msg += " (ray theta = " + std::to_string(hyp.witness->theta) + ")";
    fail(Err::SpectralHypothesisFailed, msg);
  }
  auto RS = make_order_reduction(double(mu));
  // A(lambda) = tau^mu e^{i theta} - A, classified through the reduction
  SymbolPtr Alam = sub(tau_phase_symbol(mu), A_fixed);
  auto tp = toeplitz_parametrix(Alam, P, P, RS, strip, grid, opt);

  ResolventRecord rec;
  rec.sobolev_s = sobolev_s;
  rec.lambdas = sample_lambda(strip);
  rec.tau_threshold = tp.tau_threshold;
  rec.residual_left = tp.residual_left;
  rec.residual_right = tp.residual_right;
  const size_t n = rec.lambdas.size();
  rec.z_samples.resize(n);
  rec.inverse_norms.resize(n);
  rec.oracle_gap.resize(n);
  rec.domain_gains.resize(n);
  CircleGrid gp = grid;
  gp.N0 = gp.N1 = A_fixed->cols();
  par::for_index(n, [&](std::size_t i) {
    const Lambda lam = rec.lambdas[i];
    const cplx z = std::pow(lam.tau, double(mu)) *
                   std::exp(cplx(0.0, lam.theta));
    rec.z_samples[i] = z;
    Mat p = quantize_serial(P.p, lam, gp).matrix;
    Mat a = quantize_serial(A_fixed, lam, gp).matrix;
    Mat Q = fiber_range_basis(p);
    const int dim = int(p.rows());
    Mat zPA = z * p - p * a * p;
    Mat C = Q.adjoint() * zPA * Q;
    Mat X = Q * C.partialPivLu().solve(Q.adjoint());  // compressed inverse
    rec.inverse_norms[i] =
        restricted_sobolev_norm(X, Q, grid.K, A_fixed->cols(), sobolev_s,
                                sobolev_s);
    rec.oracle_gap[i] = (tp.full_inverse[i].size() > 0)
                            ? (X - tp.full_inverse[i]).operatorNorm()
                            : std::numeric_limits<double>::quiet_NaN();
    rec.domain_gains[i] = restricted_sobolev_norm(
        X, Q, grid.K, A_fixed->cols(), sobolev_s, sobolev_s + mu);
    (void)dim;
  });
  rec.domain_gain =
      *std::max_element(rec.domain_gains.begin(), rec.domain_gains.end());
  // per-ray decay fits over tau >= 10 (at least two decades on the default
  // grid)
  for (size_t ti = 0; ti < strip.theta_samples.size(); ++ti) {
    std::vector<double> zs, ns;
    for (size_t q = 0; q < strip.tau_samples.size(); ++q) {
      const size_t idx = q * strip.theta_samples.size() + ti;
      const double zabs = std::abs(rec.z_samples[idx]);
      if (rec.lambdas[idx].tau < 10.0) continue;
      zs.push_back(zabs);
      ns.push_back(rec.inverse_norms[idx]);
    }
    ResolventRecord::Ray ray;
    ray.theta = strip.theta_samples[ti];
    if (zs.size() >= 2) {
      auto f = fit_loglog(zs, ns);
      ray.fitted_slope = f.slope;
      ray.C_fit = std::exp(f.intercept);
    }
    rec.rays.push_back(ray);
  }
  return rec;
}

RemarkIdentityResult remark_identity_check(const SymbolPtr& A_fixed,
                                           const SymbolPtr& B_aux, int mu,
                                           const ProjectionSymbol& P,
                                           const std::vector<double>& taus,
                                           const ParameterStrip& strip,
                                           const CircleGrid& grid) {
  RemarkIdentityResult out;
  CircleGrid gp = grid;
  gp.N0 = gp.N1 = A_fixed->cols();
  const Lambda lam0{taus.empty() ? 1.0 : taus.front(), 0.0};
  Mat p = quantize(P.p, lam0, gp).matrix;
  Mat a = quantize(A_fixed, lam0, gp).matrix;
  Mat b = quantize(B_aux, lam0, gp).matrix;
  const int dim = int(p.rows());
  Mat I = Mat::Identity(dim, dim);
  Mat q = I - p;
  Mat Cm = p * a * p + q * b * q;
  for (double tau : taus) {
    const double zmu = std::pow(tau, double(mu));
    Mat lhs = p * (zmu * I - a) * p + q * (zmu * I - b) * q;
    Mat rhs = zmu * I - Cm;
    out.max_identity_residual = std::max(
        out.max_identity_residual, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  // spectral split on the cosphere: sector verdicts of the blocks vs the sum
  bool free_c = true, free_p = true, free_b = true;
  auto hcA = A_fixed->principal();
  auto hcB = B_aux->principal();
  if (!hcA || !hcB) fail(Err::NoPrincipalData, "principal data needed");
  for (int phi : {1, -1})
    for (double x : grid.x_points()) {
      Mat pp = principal_at(P, x, phi, strip.theta_samples.front());
      Mat av = hcA->eval_polar_value(x, phi, M_PI / 2.0, 0.0);
      Mat bv = hcB->eval_polar_value(x, phi, M_PI / 2.0, 0.0);
      Mat qq = Mat::Identity(pp.rows(), pp.cols()) - pp;
      Mat cv = pp * av * pp + qq * bv * qq;
      auto sector_free = [&](const Mat& m, const Mat& proj) {
        Mat bs = fiber_range_basis(proj);
        if (bs.cols() == 0) return true;
        Mat comp = bs.adjoint() * m * bs;
        Eigen::ComplexEigenSolver<Mat> eig(comp);
        for (int j = 0; j < eig.eigenvalues().size(); ++j)
          if (in_sector(eig.eigenvalues()(j), strip.theta_min,
                        strip.theta_max))
            return false;
        return true;
      };
      free_p = free_p && sector_free(pp * av * pp, pp);
      free_b = free_b && sector_free(qq * bv * qq, qq);
      // the combined symbol acts on the whole fiber
      Eigen::ComplexEigenSolver<Mat> eig(cv);
      for (int j = 0; j < eig.eigenvalues().size(); ++j)
        if (in_sector(eig.eigenvalues()(j), strip.theta_min, strip.theta_max))
          free_c = false;
    }
  out.sector_free_compressed = free_p;
  out.sector_free_auxiliary = free_b;
  out.sector_free_combined = free_c;
  out.spectral_equivalence = (free_c == (free_p && free_b));
  return out;
}

}  // namespace psdo
