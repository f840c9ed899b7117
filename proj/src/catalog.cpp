#include "psdo/catalog.hpp"

#include <cmath>
#include <random>

#include "psdo/nodes.hpp"

namespace psdo {

namespace {

Jet jet_xi(const EvalPoint& p, JetSpec s) {
  return Jet::variable(s, p.x.size(), p.xi, 0);
}
Jet jet_tau(const EvalPoint& p, JetSpec s) {
  return Jet::variable(s, p.x.size(), p.tau, 2);
}
Jet jet_x(const EvalPoint& p, JetSpec s) {
  return Jet::variable(s, p.x.cast<cplx>(), 1);
}

PolarFn constant_polar(const Mat& value) {
  return [value](const PolarPoint& q, JetSpec s) {
    return JetMat::constant(s, value, q.x.size());
  };
}

}  // namespace

SymbolPtr constant_symbol(const Mat& value) {
  GeneratorConfig cfg;
  cfg.name = "const";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.rows = int(value.rows());
  cfg.cols = int(value.cols());
  cfg.dep_x = cfg.dep_xi = cfg.dep_tau = false;
  cfg.eval = [value](const EvalPoint& p, JetSpec s) {
    return JetMat::constant(s, value, p.x.size());
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = cfg.rows;
  hc->cols = cfg.cols;
  hc->polar = constant_polar(value);
  hc->cartesian = cfg.eval;
  cfg.principal = hc;
  auto node = make_generator(cfg);
  // limit family of a constant is the constant itself
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.tag = LimitClass::InCalculus;
  cfg2.limit.datum = node;
  cfg2.limit.datum_zero = value.cwiseAbs().maxCoeff() == 0.0;
  return make_generator(cfg2);
}

SymbolPtr constant_symbol(cplx value) {
  Mat m(1, 1);
  m(0, 0) = value;
  return constant_symbol(m);
}

SymbolPtr bessel_symbol(double s) {
  GeneratorConfig cfg;
  cfg.name = "bessel(" + std::to_string(s) + ")";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = s;
  cfg.dep_xi = true;
  cfg.eval = [s](const EvalPoint& p, JetSpec sp) {
    Jet xi = jet_xi(p, sp);
    Jet u = xi * xi;
    u.coeff(0, 0, 0) += Arr::Constant(p.x.size(), 1.0);
    return JetMat::from_scalar(u.pow(0.5 * s));
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = s;
  hc->rows = hc->cols = 1;
  hc->polar = [s](const PolarPoint& q, JetSpec sp) {
    Jet rho = Jet::variable(sp, q.x.size(), q.rho, 0);
    return JetMat::from_scalar(rho.sin().pow(s));
  };
  hc->cartesian = [s](const EvalPoint& p, JetSpec sp) {
    if (p.xi == 0.0) fail(Err::NonEvaluable, "|xi|^s at xi = 0");
    Jet xi = jet_xi(p, sp);
    if (p.xi < 0.0) xi = -xi;
    return JetMat::from_scalar(xi.pow(s));
  };
  cfg.principal = hc;
  if (s <= 0.0) {
    cfg.limit.tag = LimitClass::InCalculus;
  } else {
    cfg.limit.tag = LimitClass::FixedPositive;
  }
  auto node = make_generator(cfg);
  if (s <= 0.0) {
    GeneratorConfig cfg2 = cfg;
    cfg2.limit.datum = node;
    return make_generator(cfg2);
  }
  return node;
}

SymbolPtr param_bessel_symbol(double s) {
  GeneratorConfig cfg;
  cfg.name = "param_bessel(" + std::to_string(s) + ")";
  cfg.kind = SymbolKind::ClassicalParam;
  cfg.order = s;
  cfg.dep_xi = true;
  cfg.dep_tau = true;
  cfg.eval = [s](const EvalPoint& p, JetSpec sp) {
    Jet xi = jet_xi(p, sp);
    Jet tau = jet_tau(p, sp);
    Jet u = xi * xi + tau * tau;
    u.coeff(0, 0, 0) += Arr::Constant(p.x.size(), 1.0);
    return JetMat::from_scalar(u.pow(0.5 * s));
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = s;
  hc->rows = hc->cols = 1;
  hc->polar = [](const PolarPoint& q, JetSpec sp) {
    return JetMat::constant(sp, Mat::Identity(1, 1), q.x.size());
  };
  hc->cartesian = [s](const EvalPoint& p, JetSpec sp) {
    Jet xi = jet_xi(p, sp);
    Jet tau = jet_tau(p, sp);
    Jet u = xi * xi + tau * tau;
    return JetMat::from_scalar(u.pow(0.5 * s));
  };
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::ClassicalPure;
  cfg.limit.datum = constant_symbol(cplx(1.0, 0.0));
  cfg.limit.classical_order = s;
  return make_generator(cfg);
}

SymbolPtr phase_symbol(int m) {
  GeneratorConfig cfg;
  cfg.name = "phase(" + std::to_string(m) + ")";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.dep_x = (m != 0);
  cfg.dep_xi = false;
  cfg.eval = [m](const EvalPoint& p, JetSpec sp) {
    Jet x = jet_x(p, sp);
    return JetMat::from_scalar(x.scaled(cplx(0.0, double(m))).exp());
  };
  cfg.x_modes = std::make_pair(m, std::vector<cplx>{cplx(1.0, 0.0)});
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = hc->cols = 1;
  hc->polar = [m](const PolarPoint& q, JetSpec sp) {
    Jet x = Jet::variable(sp, q.x.cast<cplx>(), 1);
    return JetMat::from_scalar(x.scaled(cplx(0.0, double(m))).exp());
  };
  hc->cartesian = cfg.eval;
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::InCalculus;
  auto node = make_generator(cfg);
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.datum = node;
  return make_generator(cfg2);
}

SymbolPtr band_limited_symbol(const std::vector<cplx>& coeffs) {
  if (coeffs.size() % 2 == 0)
    fail(Err::ConfigInvalid, "coefficient list must have odd length");
  const int B = int(coeffs.size() / 2);
  GeneratorConfig cfg;
  cfg.name = "band_limited(" + std::to_string(B) + ")";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.dep_x = true;
  cfg.dep_xi = false;
  auto eval = [coeffs, B](const EvalPoint& p, JetSpec sp) {
    Jet x = jet_x(p, sp);
    Jet acc(sp, p.x.size());
    for (int m = -B; m <= B; ++m) {
      cplx c = coeffs[m + B];
      if (c == cplx(0.0, 0.0)) continue;
      acc += x.scaled(cplx(0.0, double(m))).exp().scaled(c);
    }
    return JetMat::from_scalar(acc);
  };
  cfg.eval = eval;
  cfg.x_modes = std::make_pair(-B, coeffs);
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = hc->cols = 1;
  hc->polar = [coeffs, B](const PolarPoint& q, JetSpec sp) {
    Jet x = Jet::variable(sp, q.x.cast<cplx>(), 1);
    Jet acc(sp, q.x.size());
    for (int m = -B; m <= B; ++m) {
      cplx c = coeffs[m + B];
      if (c == cplx(0.0, 0.0)) continue;
      acc += x.scaled(cplx(0.0, double(m))).exp().scaled(c);
    }
    return JetMat::from_scalar(acc);
  };
  hc->cartesian = eval;
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::InCalculus;
  auto node = make_generator(cfg);
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.datum = node;
  return make_generator(cfg2);
}

SymbolPtr tau_phase_symbol(int mu) {
  if (mu < 0) fail(Err::ConfigInvalid, "tau power must be >= 0");
  GeneratorConfig cfg;
  cfg.name = "tau_phase(" + std::to_string(mu) + ")";
  cfg.kind = SymbolKind::ClassicalParam;
  cfg.order = double(mu);
  cfg.dep_xi = false;
  cfg.dep_tau = (mu > 0);
  cfg.eval = [mu](const EvalPoint& p, JetSpec sp) {
    Jet tau = jet_tau(p, sp);
    Jet acc = Jet::constant(sp, p.x.size(), 1.0);
    for (int i = 0; i < mu; ++i) acc = acc * tau;
    return JetMat::from_scalar(
        acc.scaled(std::exp(cplx(0.0, p.theta))));
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = double(mu);
  hc->rows = hc->cols = 1;
  hc->polar = [mu](const PolarPoint& q, JetSpec sp) {
    Jet rho = Jet::variable(sp, q.x.size(), q.rho, 0);
    return JetMat::from_scalar(
        rho.cos().pow(double(mu)).scaled(std::exp(cplx(0.0, q.theta))));
  };
  hc->cartesian = cfg.eval;
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::ClassicalPure;
  cfg.limit.datum = theta_phase_symbol();
  cfg.limit.classical_order = double(mu);
  return make_generator(cfg);
}

SymbolPtr theta_phase_symbol() {
  GeneratorConfig cfg;
  cfg.name = "theta_phase";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.dep_xi = false;
  cfg.eval = [](const EvalPoint& p, JetSpec sp) {
    return JetMat::constant(
        sp, Mat::Constant(1, 1, std::exp(cplx(0.0, p.theta))), p.x.size());
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = hc->cols = 1;
  hc->polar = [](const PolarPoint& q, JetSpec sp) {
    return JetMat::constant(
        sp, Mat::Constant(1, 1, std::exp(cplx(0.0, q.theta))), q.x.size());
  };
  hc->cartesian = cfg.eval;
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::InCalculus;
  auto node = make_generator(cfg);
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.datum = node;
  return make_generator(cfg2);
}

SymbolPtr hardy_multiplier_symbol() {
  GeneratorConfig cfg;
  cfg.name = "hardy";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.dep_xi = true;
  // transition centered at -1/2, width 0.8: exactly 0/1 at the integers
  cfg.eval = [](const EvalPoint& p, JetSpec sp) {
    Jet xi = jet_xi(p, sp);
    Jet arg = xi.scaled(1.0 / 0.8);
    arg.coeff(0, 0, 0) += Arr::Constant(p.x.size(), 0.9 / 0.8);
    return JetMat::from_scalar(smoothstep(arg));
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = hc->cols = 1;
  hc->polar = [](const PolarPoint& q, JetSpec sp) {
    const double v = q.phi > 0 ? 1.0 : 0.0;
    return JetMat::constant(sp, Mat::Constant(1, 1, v), q.x.size());
  };
  hc->cartesian = [](const EvalPoint& p, JetSpec sp) {
    if (p.xi == 0.0) fail(Err::NonEvaluable, "step principal at xi = 0");
    const double v = p.xi > 0.0 ? 1.0 : 0.0;
    return JetMat::constant(sp, Mat::Constant(1, 1, v), p.x.size());
  };
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::InCalculus;
  auto node = make_generator(cfg);
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.datum = node;
  return make_generator(cfg2);
}

SymbolPtr excision_symbol(double radius) {
  GeneratorConfig cfg;
  cfg.name = "excision";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.dep_xi = true;
  cfg.eval = [radius](const EvalPoint& p, JetSpec sp) {
    Jet xi = jet_xi(p, sp);
    return JetMat::from_scalar(excision_jet(xi, radius));
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = hc->cols = 1;
  hc->polar = constant_polar(Mat::Identity(1, 1));
  hc->cartesian = [](const EvalPoint& p, JetSpec sp) {
    return JetMat::constant(sp, Mat::Identity(1, 1), p.x.size());
  };
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::InCalculus;
  auto node = make_generator(cfg);
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.datum = node;
  return make_generator(cfg2);
}

SymbolPtr scaled_excision_symbol(double c) {
  // chi(c xi): zero for |xi| <= 1/(2c), one for |xi| >= 1/c
  return excision_symbol(1.0 / c);
}

SymbolPtr rotated_projection_symbol() {
  GeneratorConfig cfg;
  cfg.name = "rotated_projection";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.rows = cfg.cols = 2;
  cfg.dep_x = true;
  cfg.dep_xi = false;
  auto entries = [](Jet x, Eigen::Index batch, JetSpec sp) {
    // u u^* with u = (cos x/2, sin x/2); half-angle forms keep it periodic
    Jet cx = x.cos();
    Jet sx = x.sin();
    Jet half = Jet::constant(sp, batch, 0.5);
    JetMat m(sp, 2, 2, batch);
    Jet c2 = (cx + Jet::constant(sp, batch, 1.0)).scaled(0.5);   // cos^2(x/2)
    Jet s2 = (Jet::constant(sp, batch, 1.0) - cx).scaled(0.5);   // sin^2(x/2)
    Jet cs = sx.scaled(0.5);                                     // cos sin
    m.at(0, 0) = c2;
    m.at(0, 1) = cs;
    m.at(1, 0) = cs;
    m.at(1, 1) = s2;
    return m;
  };
  cfg.eval = [entries](const EvalPoint& p, JetSpec sp) {
    return entries(jet_x(p, sp), p.x.size(), sp);
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 0.0;
  hc->rows = hc->cols = 2;
  hc->polar = [entries](const PolarPoint& q, JetSpec sp) {
    return entries(Jet::variable(sp, q.x.cast<cplx>(), 1), q.x.size(), sp);
  };
  hc->cartesian = cfg.eval;
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::InCalculus;
  auto node = make_generator(cfg);
  GeneratorConfig cfg2 = cfg;
  cfg2.limit.datum = node;
  return make_generator(cfg2);
}

// --- tau-profile helpers ----------------------------------------------------

namespace {

SymbolPtr tau_profile_symbol(const std::string& name,
                             std::function<Jet(Jet)> profile,
                             LimitClass limit) {
  GeneratorConfig cfg;
  cfg.name = name;
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 0.0;
  cfg.dep_xi = false;
  cfg.dep_tau = true;
  cfg.eval = [profile](const EvalPoint& p, JetSpec sp) {
    return JetMat::from_scalar(profile(jet_tau(p, sp)));
  };
  cfg.limit = limit;
  return make_generator(cfg);
}

SymbolPtr order_zero_mass() {
  // 1 + <xi>^{-1}: order-0, invertible
  return sum({constant_symbol(cplx(1.0, 0.0)), bessel_symbol(-1.0)});
}

}  // namespace

SymbolPtr arctan_tau_symbol() {
  LimitClass lc;
  lc.tag = LimitClass::InCalculus;
  lc.datum = constant_symbol(cplx(M_PI / 2.0, 0.0));
  auto prof = tau_profile_symbol(
      "arctan_tau", [](Jet t) { return t.arctan(); }, lc);
  return pointwise_scalar_product(prof, order_zero_mass());
}

SymbolPtr sinlog_tau_symbol() {
  LimitClass lc;  // Unknown: no limit family exists
  auto prof = tau_profile_symbol(
      "sinlog_tau",
      [](Jet t) {
        t.coeff(0, 0, 0) += Arr::Constant(t.batch(), 1.0);
        return t.log().sin();
      },
      lc);
  return pointwise_scalar_product(prof, order_zero_mass());
}

// --- model symbols ------------------------------------------------------------

namespace {

// the coordinate multiplier xi itself: homogeneous of degree 1, smooth
SymbolPtr xi_symbol() {
  GeneratorConfig cfg;
  cfg.name = "xi";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = 1.0;
  cfg.dep_xi = true;
  cfg.eval = [](const EvalPoint& p, JetSpec sp) {
    return JetMat::from_scalar(jet_xi(p, sp));
  };
  auto hc = std::make_shared<HomogComponent>();
  hc->degree = 1.0;
  hc->rows = hc->cols = 1;
  hc->polar = [](const PolarPoint& q, JetSpec sp) {
    Jet rho = Jet::variable(sp, q.x.size(), q.rho, 0);
    return JetMat::from_scalar(rho.sin().scaled(double(q.phi)));
  };
  hc->cartesian = cfg.eval;
  cfg.principal = hc;
  cfg.limit.tag = LimitClass::FixedPositive;
  return make_generator(cfg);
}

}  // namespace

SymbolPtr classical_model_symbol() {
  return leibniz_node(tau_phase_symbol(1), param_bessel_symbol(-1.0), 0);
}

SymbolPtr resolvent_reduced_symbol() {
  SymbolPtr factor = sub(tau_phase_symbol(1), bessel_symbol(1.0));
  return leibniz_node(param_bessel_symbol(-1.0), factor, 0);
}

SymbolPtr resolvent_reduced_perturbed_symbol(double eps) {
  SymbolPtr pert =
      leibniz_node(phase_symbol(1), param_bessel_symbol(-1.0), 0);
  return sum({resolvent_reduced_symbol(), scale(cplx(eps, 0.0), pert)});
}

SymbolPtr toeplitz_model_symbol() {
  return sum({tau_phase_symbol(1), scale(cplx(0.0, 1.0), xi_symbol())});
}

SymbolPtr toeplitz_model_perturbed_symbol(double eps) {
  return sum({toeplitz_model_symbol(), scale(cplx(eps, 0.0), phase_symbol(1))});
}

// --- catalog ----------------------------------------------------------------

SymbolPtr catalog_lookup(const std::string& id, const CatalogParams& p) {
  if (id == "identity") return constant_symbol(cplx(1.0, 0.0));
  if (id == "identity2") return constant_symbol(Mat::Identity(2, 2));
  if (id == "bessel1") return bessel_symbol(1.0);
  if (id == "bessel-inv") return bessel_symbol(-1.0);
  if (id == "param-bessel-inv") return param_bessel_symbol(-1.0);
  if (id == "hardy") return hardy_multiplier_symbol();
  if (id == "phase") return phase_symbol(1);
  if (id == "theta-phase") return theta_phase_symbol();
  if (id == "classical-model") return classical_model_symbol();
  if (id == "resolvent-reduced") return resolvent_reduced_symbol();
  if (id == "resolvent-reduced-perturbed")
    return resolvent_reduced_perturbed_symbol(p.epsilon);
  if (id == "toeplitz-model") return toeplitz_model_symbol();
  if (id == "toeplitz-model-perturbed")
    return toeplitz_model_perturbed_symbol(p.epsilon);
  if (id == "rotated-projection") return rotated_projection_symbol();
  if (id == "arctan-tau") return arctan_tau_symbol();
  if (id == "sinlog-tau") return sinlog_tau_symbol();
  if (id == "arccos-taylor") return arccos_taylor_symbol();
  fail(Err::CatalogMiss, "no catalog symbol named '" + id + "'");
}

std::vector<std::string> catalog_ids() {
  return {"identity",          "identity2",
          "bessel1",           "bessel-inv",
          "param-bessel-inv",  "hardy",
          "phase",             "theta-phase",
          "classical-model",   "resolvent-reduced",
          "resolvent-reduced-perturbed", "toeplitz-model",
          "toeplitz-model-perturbed",    "rotated-projection",
          "arctan-tau",        "sinlog-tau",
          "arccos-taylor"};
}

SymbolPtr random_band_limited_symbol(unsigned long long seed, int bandwidth) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<cplx> coeffs(2 * bandwidth + 1);
  for (int m = -bandwidth; m <= bandwidth; ++m) {
    const double decay = std::pow(2.0, -std::abs(m));
    coeffs[m + bandwidth] = decay * cplx(unif(rng), unif(rng));
  }
  return band_limited_symbol(coeffs);
}

}  // namespace psdo
