#include "psdo/calculus.hpp"

#include <cmath>

#include "psdo/fit.hpp"
#include "psdo/nodes.hpp"
#include "psdo/seminorm.hpp"

namespace psdo {

namespace {

// child evaluated at a shifted xi (used by exact composition symbols)
SymbolPtr shifted_xi_symbol(SymbolPtr a, double delta) {
  GeneratorConfig cfg;
  cfg.name = a->name() + "@xi+" + std::to_string(delta);
  cfg.kind = a->kind();
  cfg.order = a->order();
  cfg.rows = a->rows();
  cfg.cols = a->cols();
  cfg.dep_x = a->dep_x();
  cfg.dep_xi = a->dep_xi();
  cfg.dep_tau = a->dep_tau();
  SymbolPtr held = a;
  cfg.eval = [held, delta](const EvalPoint& p, JetSpec s) {
    EvalPoint q = p;
    q.xi += delta;
    return eval_jet_once(held, q, s);
  };
  return make_generator(cfg);
}

// closed-form composition of an x-independent left factor with a finite
// Fourier series in x: sum_m c_m e^{imx} a(xi + m)
SymbolPtr frequency_shift_composition(const SymbolPtr& a, const SymbolPtr& b) {
  const auto* modes = b->x_modes();
  std::vector<SymbolPtr> terms;
  const int lo = modes->first;
  for (size_t i = 0; i < modes->second.size(); ++i) {
    const cplx c = modes->second[i];
    if (c == cplx(0.0, 0.0)) continue;
    const int m = lo + int(i);
    // left factor of the node is xi-free, so the product is pointwise
    terms.push_back(scale(
        c, leibniz_node(phase_symbol(m), shifted_xi_symbol(a, double(m)), 0)));
  }
  if (terms.empty()) return scale(0.0, leibniz_node(a, b, 0));
  return sum(std::move(terms));
}

}  // namespace

LeibnizResult leibniz_product(const SymbolPtr& a, const SymbolPtr& b, int N) {
  if (N > 6) fail(Err::TruncationTooDeep, "need N <= 6");
  LeibnizResult out;
  out.symbol = leibniz_node(a, b, N);
  out.remainder_order = a->order() + b->order() - N - 1;
  const auto* node = dynamic_cast<const nodes::LeibnizNode*>(out.symbol.get());
  out.exact = node->exact();
  if (out.exact) {
    out.remainder = scale(0.0, out.symbol);
    return out;
  }
  // exact composition available for multiplier # finite-Fourier-series pairs
  if (!a->dep_x() && b->x_modes() && !b->dep_xi() && !b->dep_tau()) {
    SymbolPtr exact = frequency_shift_composition(a, b);
    out.remainder = retag_order(sub(exact, out.symbol), out.remainder_order);
  }
  return out;
}

SymbolPtr leibniz_with_remainder(const SymbolPtr& a, const SymbolPtr& b,
                                 int N) {
  LeibnizResult r = leibniz_product(a, b, N);
  if (r.exact || !r.remainder) return r.symbol;
  return sum({r.symbol, r.remainder});
}

SymbolPtr adjoint_symbol(const SymbolPtr& a, int N) {
  return adjoint_node(a, N);
}

SymbolPtr pointwise_inverse_node(SymbolPtr a) {
  return excised_inverse_node(std::move(a), 0.0);
}

SymbolPtr frozen_tau_symbol(SymbolPtr a, double tau) {
  GeneratorConfig cfg;
  cfg.name = a->name() + "@tau=" + std::to_string(tau);
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = a->order();
  cfg.rows = a->rows();
  cfg.cols = a->cols();
  cfg.dep_x = a->dep_x();
  cfg.dep_xi = a->dep_xi();
  cfg.dep_tau = false;
  SymbolPtr held = a;
  cfg.eval = [held, tau](const EvalPoint& p, JetSpec s) {
    EvalPoint q = p;
    q.tau = tau;
    JetSpec flat{s.n0, s.n1, 1};
    return eval_jet_once(held, q, flat).promoted(s);
  };
  return make_generator(cfg);
}

// --- asymptotic summation ----------------------------------------------------

AsymptoticSum asymptotic_sum(const std::vector<SymbolPtr>& components) {
  if (components.empty()) fail(Err::OrderGapInvalid, "no components");
  const double mu = components[0]->order();
  for (size_t k = 1; k < components.size(); ++k)
    if (std::abs(components[k]->order() - (mu - double(k))) > 1e-9)
      fail(Err::OrderGapInvalid,
           "component orders must decrease in integer steps");
  // coarse internal grid for the adaptive cutoff choice
  ParameterStrip strip = ParameterStrip::make(
      0.0, 0.0, log_spaced(1.0, 100.0, 1), linear_spaced(0.0, 0.0, 1));
  CircleGrid grid = CircleGrid::make(8, components[0]->cols(),
                                     components[0]->rows(), 20);
  AsymptoticSum out;
  std::vector<SymbolPtr> terms;
  for (size_t k = 0; k < components.size(); ++k) {
    double c = (k == 0) ? 1.0 : 0.5;
    if (k > 0) {
      const double target = std::pow(2.0, -double(k));
      for (int iter = 0; iter < 40; ++iter) {
        SymbolPtr term = pointwise_scalar_product(scaled_excision_symbol(c),
                                                  components[k]);
        double contrib = 0.0;
        for (const auto& spec :
             {SeminormSpec::parametric(mu - double(k) + 1.0, 0, 0, 0),
              SeminormSpec::parametric(mu - double(k) + 1.0, 1, 0, 0)})
          contrib = std::max(contrib, estimate_seminorm(term, spec, strip, grid));
        if (contrib <= target) break;
        c *= 0.5;
      }
    }
    out.cutoffs.push_back(c);
    terms.push_back(
        pointwise_scalar_product(scaled_excision_symbol(c), components[k]));
  }
  out.symbol = sum(std::move(terms));
  return out;
}

// --- limit families ----------------------------------------------------------

namespace {

struct Info {
  enum Tag { Zero, Sym, CPure, FixPos, Bad } tag = Bad;
  SymbolPtr sym;  // limit (Sym) or north-pole datum (CPure)
  double cl_order = 0.0;
  bool rapid = false;  // rapidly decaying (smoothing, vanishing)
  std::string why;
};

Info from_limit_class(const SymbolNode* n) {
  LimitClass lc = n->limit_class();
  Info info;
  switch (lc.tag) {
    case LimitClass::InCalculus:
      if (lc.datum_zero || !lc.datum) {
        info.tag = Info::Zero;
        info.rapid = n->kind() == SymbolKind::SmoothingKernel;
      } else {
        info.tag = Info::Sym;
        info.sym = lc.datum;
      }
      return info;
    case LimitClass::ClassicalPure:
      info.tag = Info::CPure;
      info.sym = lc.datum;
      info.cl_order = lc.classical_order;
      return info;
    case LimitClass::FixedPositive:
      info.tag = Info::FixPos;
      return info;
    case LimitClass::Unknown:
      info.tag = Info::Bad;
      info.why = "leaf '" + n->name() + "' has no limit classification";
      return info;
  }
  return info;
}

SymbolPtr compose_datum(const SymbolPtr& l, const SymbolPtr& r, int N) {
  const bool lscalar = l->rows() == 1 && l->cols() == 1;
  const bool rscalar = r->rows() == 1 && r->cols() == 1;
  if (lscalar && !rscalar && !l->dep_x())
    return pointwise_scalar_product(l, r);
  if (rscalar && !lscalar && !r->dep_x())
    return pointwise_scalar_product(r, l);
  return leibniz_node(l, r, N);
}

Info analyze(const SymbolPtr& n, int N);

// resolve a node to a standalone member of the calculus
Info standalone(const SymbolPtr& n, int N) {
  Info i = analyze(n, N);
  if (i.tag == Info::CPure) {
    if (i.cl_order < 0.0) {
      Info z;
      z.tag = Info::Zero;
      return z;
    }
    if (i.cl_order == 0.0) {
      Info s;
      s.tag = Info::Sym;
      s.sym = i.sym;
      return s;
    }
    Info b;
    b.tag = Info::Bad;
    b.why = "bare classical factor of positive order";
    return b;
  }
  if (i.tag == Info::FixPos) {
    Info b;
    b.tag = Info::Bad;
    b.why = "bare fixed symbol of positive order";
    return b;
  }
  return i;
}

// flatten nested products into factor lists, distributing over sums
void expand_terms(const SymbolPtr& n, cplx coeff,
                  std::vector<SymbolPtr> prefix,
                  std::vector<std::pair<cplx, std::vector<SymbolPtr>>>& out,
                  const std::vector<SymbolPtr>& suffix);

void expand_factor_seq(const std::vector<SymbolPtr>& factors, size_t at,
                       cplx coeff, std::vector<SymbolPtr> acc,
                       std::vector<std::pair<cplx, std::vector<SymbolPtr>>>& out) {
  if (out.size() > 512) fail(Err::NotInCalculus, "product expansion too large");
  if (at == factors.size()) {
    out.push_back({coeff, std::move(acc)});
    return;
  }
  const SymbolPtr& f = factors[at];
  if (f->kind() == SymbolKind::Scaled) {
    const auto* sn = dynamic_cast<const nodes::ScaledNode*>(f.get());
    auto factors2 = factors;
    factors2[at] = sn->children()[0];
    expand_factor_seq(factors2, at, coeff * sn->factor(), std::move(acc), out);
    return;
  }
  if (f->kind() == SymbolKind::Sum) {
    for (const auto& child : f->children()) {
      auto factors2 = factors;
      factors2[at] = child;
      expand_factor_seq(factors2, at, coeff, acc, out);
    }
    return;
  }
  if (f->kind() == SymbolKind::LeibnizProduct) {
    // flatten; both leibniz and pointwise-scalar products associate
    auto kids = f->children();
    auto factors2 = factors;
    factors2.erase(factors2.begin() + at);
    factors2.insert(factors2.begin() + at, kids.begin(), kids.end());
    expand_factor_seq(factors2, at, coeff, std::move(acc), out);
    return;
  }
  acc.push_back(f);
  expand_factor_seq(factors, at + 1, coeff, std::move(acc), out);
}

Info analyze_product(const std::vector<SymbolPtr>& factors, int N) {
  std::vector<std::pair<cplx, std::vector<SymbolPtr>>> terms;
  expand_factor_seq(factors, 0, cplx(1.0, 0.0), {}, terms);
  std::vector<SymbolPtr> result_terms;
  for (auto& [coeff, fs] : terms) {
    // classify each primitive factor
    std::vector<Info> infos;
    for (const auto& f : fs) infos.push_back(analyze(f, N));
    for (const auto& i : infos)
      if (i.tag == Info::Bad) return i;
    double gamma = 0.0;      // total classical order
    double fixpos = 0.0;     // total positive fixed order
    bool has_zero = false, zero_rapid = false;
    for (size_t i = 0; i < infos.size(); ++i) {
      if (infos[i].tag == Info::CPure) gamma += infos[i].cl_order;
      if (infos[i].tag == Info::FixPos) fixpos += fs[i]->order();
      if (infos[i].tag == Info::Zero) {
        has_zero = true;
        zero_rapid = zero_rapid || infos[i].rapid;
      }
    }
    if (has_zero) {
      if (gamma <= 0.0 || zero_rapid) continue;  // term vanishes
      Info b;
      b.tag = Info::Bad;
      b.why = "classical growth against a slowly vanishing factor";
      return b;
    }
    if (gamma > 0.0 || (gamma == 0.0 && fixpos > 0.0)) {
      Info b;
      b.tag = Info::Bad;
      b.why = gamma > 0.0 ? "uncompensated classical growth"
                          : "uncompensated fixed positive order";
      return b;
    }
    if (gamma < 0.0) {
      if (gamma + fixpos <= 1e-12) continue;  // decaying term
      Info b;
      b.tag = Info::Bad;
      b.why = "fixed order not fully compensated";
      return b;
    }
    // gamma == 0, no fixed positive order: compose the data in order
    SymbolPtr acc;
    for (size_t i = 0; i < infos.size(); ++i) {
      const SymbolPtr piece = infos[i].sym;
      acc = acc ? compose_datum(acc, piece, N) : piece;
    }
    if (acc) result_terms.push_back(coeff == cplx(1.0, 0.0)
                                        ? acc
                                        : scale(coeff, acc));
  }
  Info out;
  if (result_terms.empty()) {
    out.tag = Info::Zero;
    return out;
  }
  out.tag = Info::Sym;
  out.sym = result_terms.size() == 1 ? result_terms[0]
                                     : sum(std::move(result_terms));
  return out;
}

Info analyze(const SymbolPtr& n, int N) {
  switch (n->kind()) {
    case SymbolKind::Sum: {
      std::vector<SymbolPtr> nonzero;
      for (const auto& c : n->children()) {
        Info i = standalone(c, N);
        if (i.tag == Info::Bad) return i;
        if (i.tag == Info::Zero) continue;
        nonzero.push_back(i.sym);
      }
      Info out;
      if (nonzero.empty()) {
        out.tag = Info::Zero;
        return out;
      }
      out.tag = Info::Sym;
      out.sym = nonzero.size() == 1 ? nonzero[0] : sum(std::move(nonzero));
      return out;
    }
    case SymbolKind::Scaled: {
      const auto* sn = dynamic_cast<const nodes::ScaledNode*>(n.get());
      Info i = analyze(sn->children()[0], N);
      if (i.tag == Info::Sym || i.tag == Info::CPure)
        i.sym = scale(sn->factor(), i.sym);
      return i;
    }
    case SymbolKind::Adjoint: {
      const auto* an = dynamic_cast<const nodes::AdjointNode*>(n.get());
      Info i = analyze(an->children()[0], an->truncation());
      if (i.tag == Info::Sym || i.tag == Info::CPure)
        i.sym = adjoint_node(i.sym, an->truncation());
      return i;
    }
    case SymbolKind::ExcisedInverse: {
      const auto* en = dynamic_cast<const nodes::ExcisedInverseNode*>(n.get());
      Info i = analyze(en->children()[0], N);
      if (i.tag == Info::Zero) {
        Info b;
        b.tag = Info::Bad;
        b.why = "pointwise inverse of a vanishing family";
        return b;
      }
      if (i.tag == Info::FixPos) {
        Info b;
        b.tag = Info::Bad;
        b.why = "inverse of a fixed symbol of positive order grows";
        return b;
      }
      if (i.tag == Info::CPure) {
        i.sym = pointwise_inverse_node(i.sym);
        i.cl_order = -i.cl_order;
        return i;
      }
      // chi(xi) (a^infty)^{-1}
      i.sym = en->radius() > 0.0
                  ? excised_inverse_node(i.sym, en->radius())
                  : pointwise_inverse_node(i.sym);
      return i;
    }
    case SymbolKind::LeibnizProduct:
      return analyze_product(n->children(), N);
    default:
      return from_limit_class(n.get());
  }
}

}  // namespace

LimitFamily limit_family(const SymbolPtr& a, const LimitOptions& opt) {
  Info i = standalone(a, opt.leibniz_truncation);
  if (i.tag == Info::Bad) fail(Err::NotInCalculus, i.why);
  LimitFamily lf;
  lf.order = a->order();
  if (i.tag == Info::Zero) {
    lf.is_zero = true;
    lf.symbol = constant_symbol(Mat::Zero(a->rows(), a->cols()));
  } else {
    lf.symbol = i.sym;
    lf.is_zero = false;
  }
  if (opt.strip && opt.grid) {
    DecayMeasurement d = measure_limit_decay(a, lf, *opt.strip, *opt.grid);
    lf.validated_slope = d.slope;
  }
  return lf;
}

DecayMeasurement measure_limit_decay(const SymbolPtr& a, const LimitFamily& lf,
                                     const ParameterStrip& strip,
                                     const CircleGrid& grid) {
  DecayMeasurement out;
  SeminormSpec w = SeminormSpec::fixed(a->order() + 1.0);
  for (double tau : strip.tau_samples) {
    double dmax = 0.0;
    for (double theta : strip.theta_samples)
      dmax = std::max(dmax, weighted_distance_at(a, lf.symbol, w,
                                                 Lambda{tau, theta}, grid));
    out.taus.push_back(tau);
    out.distances.push_back(dmax);
  }
  out.slope = fit_loglog(out.taus, out.distances).slope;
  return out;
}

// --- membership test ----------------------------------------------------------

namespace {

double sup_dtau(const SymbolPtr& a, double tau, const ParameterStrip& strip,
                const CircleGrid& grid) {
  // mu = k = 1 makes the parametric weight exponent vanish: plain sup
  const SeminormSpec spec = SeminormSpec::parametric(1.0, 0, 0, 1);
  double sup = 0.0;
  for (double theta : strip.theta_samples)
    sup = std::max(
        sup, estimate_seminorm_at(a, spec, Lambda{tau, theta}, grid));
  return sup;
}

}  // namespace

MembershipVerdict membership_by_derivative_decay(const SymbolPtr& a,
                                                 double delta,
                                                 const ParameterStrip& strip,
                                                 const CircleGrid& grid) {
  MembershipVerdict v;
  const auto& taus = strip.tau_samples;
  const size_t half = taus.size() / 2;
  std::vector<double> ts, ms;
  for (size_t i = half; i < taus.size(); ++i) {
    ts.push_back(1.0 + taus[i]);
    ms.push_back(sup_dtau(a, taus[i], strip, grid));
  }
  double bound = 0.0;
  for (size_t i = 0; i < ts.size(); ++i)
    bound = std::max(bound, std::pow(ts[i], 1.0 + delta) * ms[i]);
  v.measured_bound = bound;
  const double noise_floor = 1e-10;
  bool all_noise = true;
  for (double m : ms) all_noise = all_noise && m < noise_floor;
  if (all_noise) {
    v.pass = true;
    v.slope = 0.0;
    v.limit = frozen_tau_symbol(a, taus.back());
    v.quad_error = 0.0;
    return v;
  }
  v.slope = fit_loglog(ts, ms).slope;
  v.pass = v.slope <= -(1.0 + delta) + 0.15;
  if (!v.pass) return v;

  // limit = a(1) + int_1^inf d_tau a dtau: composite Simpson on a dense
  // log grid plus a fitted power-law tail correction
  const double tau_hi = taus.back();
  int n_intervals = int(std::ceil(32.0 * std::log10(tau_hi)));
  if (n_intervals % 2 == 1) ++n_intervals;
  std::vector<double> qt(n_intervals + 1);
  for (int i = 0; i <= n_intervals; ++i)
    qt[size_t(i)] = std::pow(tau_hi, double(i) / n_intervals);
  const double slope = v.slope;
  SymbolPtr held = a;
  auto integrand_jet = [held](const EvalPoint& p, double tau, JetSpec s) {
    const double h = fd_step_tau(p.xi, tau);
    EvalPoint pp = p, pm = p;
    pp.tau = tau + h;
    pm.tau = tau - h;
    JetMat up = eval_jet_once(held, pp, s);
    JetMat um = eval_jet_once(held, pm, s);
    return (up - um).scaled(cplx(0.5 / h, 0.0));
  };
  GeneratorConfig cfg;
  cfg.name = a->name() + "@membership-limit";
  cfg.kind = SymbolKind::FixedSymbol;
  cfg.order = a->order();
  cfg.rows = a->rows();
  cfg.cols = a->cols();
  cfg.dep_x = a->dep_x();
  cfg.dep_xi = a->dep_xi();
  cfg.dep_tau = false;
  cfg.eval = [held, qt, slope, integrand_jet](const EvalPoint& p, JetSpec s) {
    if (s.n2 > 1)
      fail(Err::NonEvaluable, "quadrature limit has no tau derivatives");
    EvalPoint base = p;
    base.tau = 1.0;
    JetMat acc = eval_jet_once(held, base, s);
    // Simpson in log tau: int f dtau = int f tau dlog(tau)
    const double h = std::log(qt[1] / qt[0]);
    for (size_t i = 0; i + 2 < qt.size(); i += 2) {
      double w[3] = {h / 3.0, 4.0 * h / 3.0, h / 3.0};
      for (int j = 0; j < 3; ++j) {
        const double tau = qt[i + j];
        acc = acc + integrand_jet(p, tau, s).scaled(cplx(w[j] * tau, 0.0));
      }
    }
    // tail: |f| ~ C (1+tau)^slope beyond the grid
    const double tau_end = qt.back();
    if (slope < -1.0) {
      JetMat f_end = integrand_jet(p, tau_end, s);
      acc = acc + f_end.scaled(cplx((1.0 + tau_end) / (-slope - 1.0), 0.0));
    }
    return acc;
  };
  v.limit = make_generator(cfg);
  // error estimate: tail magnitude plus coarse-vs-fine quadrature difference
  v.quad_error = ms.back() * (1.0 + tau_hi) / std::max(1.0, -slope - 1.0) * 0.5;
  return v;
}

}  // namespace psdo
