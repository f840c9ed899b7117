#include "psdo/taylor.hpp"

#include <cmath>

#include "psdo/catalog.hpp"
#include "psdo/fit.hpp"
#include "psdo/nodes.hpp"

namespace psdo {

namespace {

Mat polar_value(const PolarFn& f, double x, int phi, double rho,
                double theta) {
  return f(PolarPoint{ArrR::Constant(1, x), phi, rho, theta}, JetSpec{1, 1, 1})
      .value(0);
}

// Richardson tableau for g(h) = c + O(h) with h halved each row
Mat richardson_limit(std::vector<Mat> g) {
  const int M = int(g.size());
  for (int q = 1; q < M; ++q) {
    const double f = std::pow(2.0, q);
    for (int m = M - 1; m >= q; --m) g[m] = (f * g[m] - g[m - 1]) / (f - 1.0);
  }
  return g.back();
}

}  // namespace

TaylorData taylor_expand_northpole(const PolarFn& f, int rows, int cols, int L,
                                   const TaylorVerification& v) {
  TaylorData t;
  t.rows = rows;
  t.cols = cols;
  t.evaluator = f;
  t.depth = L;
  const double rho0 = 0.4;
  const int M = 8;
  for (int j = 0; j <= L; ++j) {
    // coefficient j: previous coefficients captured by value
    auto prev = t.coefficients;
    PolarFn fe = f;
    t.coefficients.push_back(
        [fe, prev, j, rho0, M](double x, int phi, double theta) -> Mat {
          std::vector<Mat> seq;
          for (int m = 0; m < M; ++m) {
            const double h = rho0 * std::pow(2.0, -m);
            Mat val = polar_value(fe, x, phi, h, theta);
            for (size_t i = 0; i < prev.size(); ++i)
              val -= std::pow(h, double(i)) * prev[i](x, phi, theta);
            seq.push_back(val / std::pow(h, double(j)));
          }
          return richardson_limit(std::move(seq));
        });
  }
  // certify remainder slopes
  std::vector<double> slopes = taylor_remainder_slopes(f, t, L, v);
  for (int ell = 0; ell <= L; ++ell)
    if (slopes[size_t(ell)] < double(ell) + 1.0 - 0.1)
      fail(Err::ExpansionDiverges,
           "remainder slope " + std::to_string(slopes[size_t(ell)]) +
               " below " + std::to_string(ell + 1) + "-0.1 at depth " +
               std::to_string(ell));
  return t;
}

std::vector<double> taylor_remainder_slopes(const PolarFn& f,
                                            const TaylorData& t, int L,
                                            const TaylorVerification& v) {
  std::vector<double> out;
  for (int ell = 0; ell <= L; ++ell) {
    double worst = 1e9;
    for (double x : v.x_samples)
      for (int phi : v.phis)
        for (double theta : v.thetas) {
          std::vector<double> rems;
          for (double rho : v.rhos) {
            Mat val = polar_value(f, x, phi, rho, theta);
            for (int j = 0; j <= ell && j < int(t.coefficients.size()); ++j)
              val -= std::pow(rho, double(j)) *
                     t.coefficients[size_t(j)](x, phi, theta);
            rems.push_back(val.cwiseAbs().maxCoeff());
          }
          double mx = 0.0;
          for (double r : rems) mx = std::max(mx, r);
          // below the coefficient-extraction noise the slope is meaningless
          if (mx < 1e-9) continue;
          worst = std::min(worst, fit_loglog(v.rhos, rems).slope);
        }
    out.push_back(worst == 1e9 ? double(ell) + 2.0 : worst);
  }
  return out;
}

TaylorData invert_taylor(const TaylorData& t, const TaylorVerification& v) {
  if (t.rows != t.cols)
    fail(Err::ShapeMismatch, "series inverse of a non-square function");
  if (t.coefficients.empty())
    fail(Err::SingularLeadingCoefficient, "no leading coefficient");
  // pointwise invertibility of the evaluator on the verification grid
  for (double x : v.x_samples)
    for (int phi : v.phis)
      for (double theta : v.thetas)
        for (double rho : v.rhos) {
          Mat m = polar_value(t.evaluator, x, phi, rho, theta);
          Eigen::JacobiSVD<Mat> svd(m);
          const auto& sv = svd.singularValues();
          if (sv(sv.size() - 1) < 1e-12 * std::max(sv(0), 1e-30))
            fail(Err::SingularAtPoint,
                 "singular at (phi, rho, theta) = (" + std::to_string(phi) +
                     ", " + std::to_string(rho) + ", " + std::to_string(theta) +
                     ")");
        }
  // leading coefficient
  for (double x : v.x_samples)
    for (int phi : v.phis)
      for (double theta : v.thetas) {
        Mat a0 = t.coefficients[0](x, phi, theta);
        Eigen::JacobiSVD<Mat> svd(a0);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < 1e-12 * std::max(sv(0), 1e-30))
          fail(Err::SingularLeadingCoefficient,
               "leading Taylor coefficient singular at phi = " +
                   std::to_string(phi));
      }
  TaylorData out;
  out.rows = t.rows;
  out.cols = t.cols;
  out.depth = t.depth;
  PolarFn base = t.evaluator;
  out.evaluator = [base](const PolarPoint& q, JetSpec s) {
    return base(q, s).inverse();
  };
  // B_0 = A_0^{-1}; B_j = -B_0 sum_{i=1..j} A_i B_{j-i}
  auto thecoeffs = t.coefficients;
  for (size_t j = 0; j < t.coefficients.size(); ++j) {
    auto prev_inv = out.coefficients;  // B_0 .. B_{j-1}
    out.coefficients.push_back(
        [thecoeffs, prev_inv, j](double x, int phi, double theta) -> Mat {
          Mat b0 = thecoeffs[0](x, phi, theta).partialPivLu().inverse();
          if (j == 0) return b0;
          Mat acc = Mat::Zero(b0.rows(), b0.cols());
          for (size_t i = 1; i <= j; ++i)
            acc += thecoeffs[i](x, phi, theta) * prev_inv[j - i](x, phi, theta);
          return -b0 * acc;
        });
  }
  return out;
}

// --- the homogeneous-extension node ------------------------------------------

namespace {

class TaylorHomogNode : public SymbolNode {
 public:
  TaylorHomogNode(TaylorData t, double radius)
      : SymbolNode(SymbolKind::TaylorHomogeneous, 0.0, t.rows, t.cols),
        t_(std::move(t)),
        radius_(radius) {
    dep_x_ = true;  // conservative; catalog data may ignore x
    dep_xi_ = true;
    dep_tau_ = true;
    auto hc = std::make_shared<HomogComponent>();
    hc->degree = 0.0;
    hc->rows = rows_;
    hc->cols = cols_;
    hc->polar = t_.evaluator;
    hc->excision_radius = radius_;
    principal_ = hc;
  }

  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override {
    const EvalPoint& p = ctx.point();
    const Eigen::Index batch = p.x.size();
    if (std::abs(p.xi) <= 0.5 * radius_)
      return JetMat(spec, rows_, cols_, batch);
    JetMat ext =
        homogeneous_extend_eval(t_.evaluator, 0.0, rows_, cols_, p, spec);
    Jet jxi = Jet::variable(JetSpec{spec.n0, 1, 1}, batch, p.xi, 0);
    return ext.mul_scalar(excision_jet(jxi, radius_));
  }

  LimitClass limit_class() const override {
    LimitClass lc;
    lc.tag = LimitClass::InCalculus;
    if (t_.coefficients.empty()) return LimitClass{};
    auto a0 = t_.coefficients[0];
    const double radius = radius_;
    const int r = rows_, c = cols_;
    // chi(xi) a_0(x, sign xi, theta)
    GeneratorConfig cfg;
    cfg.name = "taylor-limit";
    cfg.kind = SymbolKind::FixedSymbol;
    cfg.order = 0.0;
    cfg.rows = r;
    cfg.cols = c;
    cfg.dep_x = true;
    cfg.dep_xi = true;
    cfg.eval = [a0, radius, r, c](const EvalPoint& p, JetSpec s) {
      const Eigen::Index batch = p.x.size();
      if (std::abs(p.xi) <= 0.5 * radius) return JetMat(s, r, c, batch);
      if (s.n1 > 1)
        fail(Err::NonEvaluable,
             "x-derivatives of extracted coefficients are not available");
      const int phi = p.xi > 0.0 ? 1 : -1;
      JetMat out(s, r, c, batch);
      for (Eigen::Index b = 0; b < batch; ++b) {
        Mat m = a0(p.x(b), phi, p.theta);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j) out.at(i, j).coeff(0, 0, 0)(b) = m(i, j);
      }
      Jet jxi = Jet::variable(s, batch, p.xi, 0);
      return out.mul_scalar(excision_jet(jxi, radius));
    };
    // zero when the leading coefficient vanishes identically on a probe set
    bool zero = true;
    for (int phi : {1, -1})
      for (double x : {0.0, 1.0, 2.5})
        for (double th : {0.0, 1.5, 3.0})
          zero = zero && a0(x, phi, th).cwiseAbs().maxCoeff() < 1e-13;
    lc.datum = make_generator(cfg);
    lc.datum_zero = zero;
    return lc;
  }

 private:
  TaylorData t_;
  double radius_;
};

}  // namespace

SymbolPtr homog_extend(const TaylorData& t, double excision_radius) {
  return std::make_shared<TaylorHomogNode>(t, excision_radius);
}

AngularSymbol angular_symbol(const SymbolPtr& a) {
  if (!a->principal())
    fail(Err::NoPrincipalData, "symbol carries no principal data");
  auto hc = a->principal();
  TaylorData t = taylor_expand_northpole(hc->polar, hc->rows, hc->cols, 0);
  AngularSymbol out;
  out.rows = hc->rows;
  out.cols = hc->cols;
  auto c0 = t.coefficients[0];
  out.evaluator = [c0](double x, int phi, double theta) {
    return c0(x, phi, theta);
  };
  return out;
}

TaylorData taylor_from_closed_form(
    PolarFn f, int rows, int cols,
    std::vector<std::function<Mat(double, int, double)>> coefficients) {
  TaylorData t;
  t.rows = rows;
  t.cols = cols;
  t.evaluator = std::move(f);
  t.coefficients = std::move(coefficients);
  t.depth = int(t.coefficients.size()) - 1;
  return t;
}

PolarFn reduced_resolvent_polar() {
  return [](const PolarPoint& q, JetSpec s) {
    Jet rho = Jet::variable(s, q.x.size(), q.rho, 0);
    Jet v = rho.cos().scaled(std::exp(cplx(0.0, q.theta))) - rho.sin();
    return JetMat::from_scalar(v);
  };
}

PolarFn rho_polar() {
  return [](const PolarPoint& q, JetSpec s) {
    return JetMat::from_scalar(Jet::variable(s, q.x.size(), q.rho, 0));
  };
}

SymbolPtr arccos_taylor_symbol() {
  auto zero = [](double, int, double) { return Mat::Zero(1, 1); };
  auto one = [](double, int, double) { return Mat::Identity(1, 1); };
  TaylorData t = taylor_from_closed_form(rho_polar(), 1, 1, {zero, one});
  return homog_extend(t, 1.0);
}

}  // namespace psdo
