#include "psdo/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psdo/nodes.hpp"
#include "psdo/parallel.hpp"
#include "psdo/taylor.hpp"

namespace psdo {

namespace {

double min_singular_value(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  return sv.size() ? sv(sv.size() - 1) : 0.0;
}

// golden-section minimization over one coordinate
template <typename F>
double golden_min(F f, double lo, double hi, int iters = 48) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

Sigma3Certificate sigma3_certificate(const LimitFamily& lf,
                                     const ParameterStrip& strip,
                                     const EllipticityOptions& opt) {
  Sigma3Certificate cert;
  cert.K = opt.sigma3_K;
  if (lf.is_zero) {
    cert.pass = false;
    return cert;
  }
  const int N = lf.symbol->rows();
  double svK = 1e300, sv2K = 1e300;
  for (double theta : strip.theta_samples) {
    Lambda lam{0.0, theta};
    auto TK = quantize(lf.symbol, lam, CircleGrid::make(opt.sigma3_K, N, N));
    auto T2K =
        quantize(lf.symbol, lam, CircleGrid::make(2 * opt.sigma3_K, N, N));
    svK = std::min(svK, min_singular_value(TK.matrix));
    sv2K = std::min(sv2K, min_singular_value(T2K.matrix));
  }
  cert.sv_K = svK;
  cert.sv_2K = sv2K;
  cert.drift = std::abs(svK - sv2K) / std::max({svK, sv2K, 1e-300});
  cert.pass = svK >= opt.sv_threshold && sv2K >= opt.sv_threshold &&
              cert.drift < 0.10;
  return cert;
}

}  // namespace

EllipticityReport check_rough(const SymbolPtr& a, double mu,
                              const ParameterStrip& strip,
                              const CircleGrid& grid,
                              const EllipticityOptions& opt) {
  if (a->rows() != a->cols())
    fail(Err::ShapeMismatch, "ellipticity needs a square symbol");
  EllipticityReport rep;
  // (I): pointwise invertibility and |a^{-1}| <xi>^mu bound for |xi| >= C
  const auto lambdas = sample_lambda(strip);
  const auto xs = grid.x_points();
  bool pass_I = true;
  double constant = 0.0;
  Witness wit;
  for (const auto& lam : lambdas) {
    for (double xi : grid.xi_points()) {
      if (std::abs(xi) < opt.xi_lower_bound) continue;
      for (double x : xs) {
        Mat v = a->value(x, xi, lam.tau, lam.theta);
        const double sv = min_singular_value(v);
        if (sv < opt.sv_threshold) {
          if (pass_I || sv < wit.min_singular_value) {
            wit.kind = Witness::Cartesian;
            wit.x = x;
            wit.xi = xi;
            wit.tau = lam.tau;
            wit.theta = lam.theta;
            wit.min_singular_value = sv;
          }
          pass_I = false;
          continue;
        }
        const double inv_norm = v.partialPivLu().inverse().operatorNorm();
        constant = std::max(constant,
                            inv_norm * std::pow(japanese_bracket(xi), mu));
      }
    }
  }
  rep.verdicts["I"] = pass_I;
  rep.constant = constant;
  if (!pass_I) rep.witness = wit;
  // (II): invertibility of the limit family, doubling certificate
  try {
    LimitFamily lf = limit_family(a);
    rep.sigma3 = sigma3_certificate(lf, strip, opt);
    rep.verdicts["II"] = rep.sigma3.pass;
  } catch (const PsdoError&) {
    rep.verdicts["II"] = false;
  }
  return rep;
}

EllipticityReport check_refined(const SymbolPtr& a,
                                const ParameterStrip& strip,
                                const CircleGrid& grid,
                                const EllipticityOptions& opt) {
  if (!a->principal())
    fail(Err::NoPrincipalData, "refined test needs principal data");
  EllipticityReport rep;
  auto hc = a->principal();
  const auto xs = grid.x_points();
  // S1, principal part: pole-punctured semicircle
  bool pass_p = true;
  Witness wit;
  std::vector<double> rhos =
      linear_spaced(opt.rho_min, M_PI / 2.0, opt.rho_samples);
  for (int phi : {1, -1})
    for (double rho : rhos)
      for (double theta : strip.theta_samples)
        for (double x : xs) {
          Mat v = hc->eval_polar_value(x, phi, rho, theta);
          const double sv = min_singular_value(v);
          if (sv < opt.sv_threshold &&
              (pass_p || sv < wit.min_singular_value)) {
            wit.kind = Witness::Polar;
            wit.x = x;
            wit.phi = phi;
            wit.rho = rho;
            wit.theta = theta;
            wit.min_singular_value = sv;
            pass_p = false;
          }
        }
  if (!pass_p) {
    // sharpen the witness so re-evaluation lands on a near-zero
    auto sv_at = [&](double rho, double theta) {
      return min_singular_value(
          hc->eval_polar_value(wit.x, wit.phi, rho, theta));
    };
    for (int round = 0; round < 3; ++round) {
      const double r0 = wit.rho, t0 = wit.theta;
      wit.rho = golden_min([&](double r) { return sv_at(r, wit.theta); },
                           std::max(opt.rho_min, r0 - 0.3),
                           std::min(M_PI / 2.0, r0 + 0.3));
      wit.theta = golden_min([&](double t) { return sv_at(wit.rho, t); },
                             std::max(strip.theta_min, t0 - 0.3),
                             std::min(strip.theta_max, t0 + 0.3));
    }
    wit.min_singular_value = sv_at(wit.rho, wit.theta);
  }
  rep.verdicts["S1-principal"] = pass_p;
  if (!pass_p) rep.witness = wit;
  // S1, angular part: invertibility of the leading Taylor coefficient
  bool pass_ang = true;
  try {
    AngularSymbol ang = angular_symbol(a);
    for (int phi : {1, -1})
      for (double theta : strip.theta_samples)
        for (double x : xs) {
          const double sv = min_singular_value(ang.evaluator(x, phi, theta));
          if (sv < opt.sv_threshold) {
            pass_ang = false;
            if (!rep.witness) {
              Witness w;
              w.kind = Witness::Polar;
              w.x = x;
              w.phi = phi;
              w.rho = 0.0;
              w.theta = theta;
              w.min_singular_value = sv;
              rep.witness = w;
            }
          }
        }
  } catch (const PsdoError&) {
    pass_ang = false;
  }
  rep.verdicts["S1-angular"] = pass_ang;
  // S2: limit family with the doubling certificate
  try {
    LimitFamily lf = limit_family(a);
    rep.sigma3 = sigma3_certificate(lf, strip, opt);
    rep.verdicts["S2-limit"] = rep.sigma3.pass;
  } catch (const PsdoError&) {
    rep.verdicts["S2-limit"] = false;
  }
  // measured constant over the semicircle
  double constant = 0.0;
  if (rep.pass()) {
    for (int phi : {1, -1})
      for (double rho : rhos)
        for (double theta : strip.theta_samples) {
          Mat v = hc->eval_polar_value(0.0, phi, rho, theta);
          constant =
              std::max(constant, v.partialPivLu().inverse().operatorNorm());
        }
  }
  rep.constant = constant;
  return rep;
}

SymbolPtr excised_inverse(const SymbolPtr& a, const EllipticityReport& report,
                          double excision_radius) {
  if (!report.pass())
    fail(Err::ReportFailed, "ellipticity report does not pass");
  return excised_inverse_node(a, excision_radius);
}

SymbolPtr neumann_parametrix(const SymbolPtr& a, int L,
                             const EllipticityOptions& opt) {
  if (L > 6) fail(Err::DepthTooLarge, "Neumann depth limited to 6");
  const int N = opt.leibniz_N;
  SymbolPtr b0 = excised_inverse_node(a, 1.0);
  SymbolPtr one = constant_symbol(Mat::Identity(a->rows(), a->cols()));
  // the leading parts cancel: the residual is one order lower than the
  // bookkeeping of the difference shows
  SymbolPtr r = retag_order(sub(one, leibniz_node(a, b0, N)), -1.0);
  // t_k = b0 # r^{#k}, assembled with adaptive excisions
  std::vector<SymbolPtr> terms;
  SymbolPtr rpow;  // r^{#k}, left-associated
  for (int k = 0; k <= L; ++k) {
    if (k == 0)
      terms.push_back(b0);
    else {
      rpow = rpow ? leibniz_node(rpow, r, N) : r;
      terms.push_back(leibniz_node(b0, rpow, N));
    }
  }
  SymbolPtr bprime = asymptotic_sum(terms).symbol;
  // limit-family correction makes the residual limit vanish
  SymbolPtr rprime = sub(one, leibniz_node(a, bprime, N));
  LimitFamily lf_r = limit_family(rprime);
  if (lf_r.is_zero) return bprime;
  LimitFamily lf_a = limit_family(a);
  if (lf_a.is_zero)
    fail(Err::NotInCalculus, "vanishing limit family cannot be inverted");
  SymbolPtr correction =
      leibniz_node(pointwise_inverse_node(lf_a.symbol), lf_r.symbol, N);
  return sum({bprime, correction});
}

SmoothingInverse invert_one_plus_smoothing(const SmoothingKernel& r) {
  if (!r.vanishing_at_infinity)
    fail(Err::NeverSmall, "family is not flagged vanishing at infinity");
  const auto& lambdas = r.data->lambdas;
  // first grid tau beyond which ||r|| <= 1/2 for every theta
  std::map<double, double> max_norm_at_tau;
  for (int i = 0; i < r.size(); ++i) {
    double& m = max_norm_at_tau[lambdas[size_t(i)].tau];
    m = std::max(m, r.at(i).operatorNorm());
  }
  double threshold = -1.0;
  for (auto it = max_norm_at_tau.begin(); it != max_norm_at_tau.end(); ++it) {
    bool ok = true;
    for (auto jt = it; jt != max_norm_at_tau.end(); ++jt)
      ok = ok && jt->second <= 0.5;
    if (ok) {
      threshold = it->first;
      break;
    }
  }
  if (threshold < 0.0)
    fail(Err::NeverSmall, "||r|| never drops below 1/2 on the grid");
  std::vector<Mat> s_mats;
  const int n = int(r.at(0).rows());
  for (int i = 0; i < r.size(); ++i) {
    const Mat& R = r.at(i);
    const double chi =
        excision(lambdas[size_t(i)].tau / std::max(threshold, 1e-30), 1.0);
    Mat S = -R;
    if (chi != 0.0) {
      Mat one_plus = Mat::Identity(n, n) + R;
      S += chi * (R * one_plus.partialPivLu().solve(R));
    }
    s_mats.push_back(std::move(S));
  }
  SmoothingInverse out;
  out.s = encode_smoothing(lambdas, std::move(s_mats), r.data->K, r.data->N0,
                           r.data->N1);
  out.threshold = threshold;
  return out;
}

Mat ParametrixResult::full_inverse(int i) const {
  return op_b[size_t(i)] + tail.at(i);
}

ParametrixResult parametrix(const SymbolPtr& a, int L,
                            const ParameterStrip& strip,
                            const CircleGrid& grid,
                            const EllipticityOptions& opt) {
  ParametrixResult out;
  out.report = a->weakly_classical()
                   ? check_refined(a, strip, grid, opt)
                   : check_rough(a, a->order(), strip, grid, opt);
  if (!out.report.pass()) {
    std::string which;
    for (const auto& [k, v] : out.report.verdicts)
      if (!v) which += (which.empty() ? "" : ", ") + k;
    fail(Err::EllipticityFailed, "conditions failed: " + which);
  }
  out.b = neumann_parametrix(a, L, opt);
  out.neumann_depth = L;
  out.lambdas = sample_lambda(strip);
  const int dim = (2 * grid.K + 1) * grid.N0;

  std::vector<Mat> op_a(out.lambdas.size());
  out.op_b.resize(out.lambdas.size());
  par::for_index(out.lambdas.size(), [&](std::size_t i) {
    op_a[i] = quantize_serial(a, out.lambdas[i], grid).matrix;
    out.op_b[i] = quantize_serial(out.b, out.lambdas[i], grid).matrix;
  });

  // 1 + r_op = Op(a) Op(b); inverting 1 + r_op turns Op(b)(1+s) into an
  // exact right inverse past the threshold
  std::vector<Mat> r_op(out.lambdas.size());
  for (size_t i = 0; i < out.lambdas.size(); ++i)
    r_op[i] = op_a[i] * out.op_b[i] - Mat::Identity(dim, dim);
  out.neumann_residual_norm.resize(out.lambdas.size());
  for (size_t i = 0; i < out.lambdas.size(); ++i)
    out.neumann_residual_norm[i] = r_op[i].operatorNorm();
  auto r_kernel =
      encode_smoothing(out.lambdas, std::move(r_op), grid.K, grid.N0, grid.N1);
  SmoothingInverse sinv = invert_one_plus_smoothing(r_kernel);

  // per-theta thresholds: first grid tau with ||r_op|| <= 1/2 upward
  out.tau_threshold_per_theta.assign(strip.theta_samples.size(), -1.0);
  for (size_t ti = 0; ti < strip.theta_samples.size(); ++ti) {
    for (size_t q = 0; q < strip.tau_samples.size(); ++q) {
      bool ok = true;
      for (size_t q2 = q; q2 < strip.tau_samples.size(); ++q2) {
        const size_t idx = q2 * strip.theta_samples.size() + ti;
        ok = ok && out.neumann_residual_norm[idx] <= 0.5;
      }
      if (ok) {
        out.tau_threshold_per_theta[ti] = strip.tau_samples[q];
        break;
      }
    }
    if (out.tau_threshold_per_theta[ti] < 0.0)
      fail(Err::NeverSmall, "no threshold at some theta ray");
  }
  out.tau_threshold = *std::max_element(out.tau_threshold_per_theta.begin(),
                                        out.tau_threshold_per_theta.end());

  // assemble B = Op(b)(1 + s), residuals, oracle gaps
  std::vector<Mat> tail_mats(out.lambdas.size());
  out.residual_left.resize(out.lambdas.size());
  out.residual_right.resize(out.lambdas.size());
  out.oracle_gap.assign(out.lambdas.size(),
                        std::numeric_limits<double>::quiet_NaN());
  par::for_index(out.lambdas.size(), [&](std::size_t i) {
    tail_mats[i] = out.op_b[i] * sinv.s.at(int(i));
    Mat B = out.op_b[i] + tail_mats[i];
    Mat I = Mat::Identity(dim, dim);
    out.residual_right[i] = (I - op_a[i] * B).operatorNorm();
    out.residual_left[i] = (I - B * op_a[i]).operatorNorm();
    Eigen::PartialPivLU<Mat> lu(op_a[i]);
    Mat exact = lu.inverse();
    const double rc = (op_a[i] * exact - I).operatorNorm();
    if (rc < 1e-6) out.oracle_gap[i] = (B - exact).operatorNorm();
  });
  out.tail = encode_smoothing(out.lambdas, std::move(tail_mats), grid.K,
                              grid.N0, grid.N1);
  return out;
}

}  // namespace psdo
