#include "psdo/symbol.hpp"

#include <cmath>

#include "psdo/nodes.hpp"

namespace psdo {

namespace {

JetSpec collapse_for(const SymbolNode* node, JetSpec spec) {
  return JetSpec{node->dep_xi() ? spec.n0 : 1, node->dep_x() ? spec.n1 : 1,
                 node->dep_tau() ? spec.n2 : 1};
}

}  // namespace

const JetMat& EvalContext::jet(const SymbolNode* node, JetSpec spec) {
  // extents collapse along variables the node does not depend on; the
  // missing coefficients are read back as zeros
  JetSpec want = collapse_for(node, spec);
  auto it = cache_.find(node);
  if (it != cache_.end() && it->second.spec().covers(want)) return it->second;
  if (it != cache_.end()) want = JetSpec::lub(want, it->second.spec());
  auto sched = wanted_.find(node);
  if (sched != wanted_.end()) want = JetSpec::lub(want, sched->second);
  JetMat computed = node->eval_jet(*this, want);
  auto& slot = cache_[node];
  slot = std::move(computed);
  return slot;
}

void EvalContext::prepare(const SymbolNode* root, JetSpec spec) {
  JetSpec want = collapse_for(root, spec);
  auto it = wanted_.find(root);
  if (it != wanted_.end()) {
    if (it->second.covers(want)) return;  // nothing new to propagate
    want = JetSpec::lub(want, it->second);
  }
  wanted_[root] = want;
  for (const auto& [child, cspec] : root->child_specs(want))
    prepare(child, cspec);
}

Mat SymbolNode::value(double x, double xi, double tau, double theta) const {
  EvalContext ctx(EvalPoint{ArrR::Constant(1, x), xi, tau, theta});
  return eval_jet(ctx, JetSpec{1, 1, 1}).value(0);
}

LimitClass SymbolNode::limit_class() const { return LimitClass{}; }

Mat eval_value(const SymbolPtr& a, double x, double xi, double tau,
               double theta) {
  return a->value(x, xi, tau, theta);
}

JetMat eval_jet_once(const SymbolPtr& a, const EvalPoint& p, JetSpec s) {
  EvalContext ctx(p);
  ctx.prepare(a.get(), s);
  return a->eval_jet(ctx, s);
}

// --- HomogComponent ---------------------------------------------------------

JetMat homogeneous_extend_eval(const PolarFn& polar, double degree, int rows,
                               int cols, const EvalPoint& p, JetSpec spec) {
  if (p.xi == 0.0)
    fail(Err::NonEvaluable, "homogeneous extension evaluated on the pole ray");
  const Eigen::Index batch = p.x.size();
  const int phi = p.xi > 0.0 ? 1 : -1;
  Jet jxi = Jet::variable(spec, batch, p.xi, 0);
  Jet jtau = Jet::variable(spec, batch, p.tau, 2);
  Jet r2 = jxi * jxi + jtau * jtau;
  Jet rho = (jtau * r2.pow(-0.5)).arccos();
  const double rho0 = rho.value()(0).real();
  // rho-Taylor coefficients of the polar function as x-jets
  const int nrho = (spec.n0 - 1) + (spec.n2 - 1) + 1;
  JetMat F = polar(PolarPoint{p.x, phi, rho0, p.theta},
                   JetSpec{nrho, spec.n1, 1});
  Jet drho = rho;
  drho.coeff(0, 0, 0) = Arr::Zero(batch);
  auto slice = [&](int r) {
    JetMat out(JetSpec{1, spec.n1, 1}, rows, cols, batch);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        for (int q = 0; q < spec.n1; ++q)
          out.at(i, j).coeff(0, q, 0) = F.at(i, j).coeff(r, q, 0);
    return out.promoted(spec);
  };
  JetMat G = slice(nrho - 1);
  for (int r = nrho - 2; r >= 0; --r) G = G.mul_scalar(drho) + slice(r);
  if (degree != 0.0) G = G.mul_scalar(r2.pow(0.5 * degree));
  return G;
}

JetMat HomogComponent::eval_cartesian(const EvalPoint& p, JetSpec s) const {
  if (cartesian) return cartesian(p, s);
  return homogeneous_extend_eval(polar, degree, rows, cols, p, s);
}

Mat HomogComponent::eval_polar_value(double x, int phi, double rho,
                                     double theta) const {
  return polar(PolarPoint{ArrR::Constant(1, x), phi, rho, theta},
               JetSpec{1, 1, 1})
      .value(0);
}

// --- nodes ------------------------------------------------------------------

namespace nodes {

Generator::Generator(GeneratorConfig cfg)
    : SymbolNode(cfg.kind, cfg.order, cfg.rows, cfg.cols), cfg_(std::move(cfg)) {
  dep_x_ = cfg_.dep_x;
  dep_xi_ = cfg_.dep_xi;
  dep_tau_ = cfg_.dep_tau;
  name_ = cfg_.name;
  principal_ = cfg_.principal;
}

JetMat Generator::eval_jet(EvalContext& ctx, JetSpec spec) const {
  return cfg_.eval(ctx.point(), spec);
}

SumNode::SumNode(std::vector<SymbolPtr> terms)
    : SymbolNode(SymbolKind::Sum, 0.0, terms.at(0)->rows(),
                 terms.at(0)->cols()),
      terms_(std::move(terms)) {
  double ord = terms_[0]->order();
  dep_x_ = dep_xi_ = dep_tau_ = false;
  for (const auto& t : terms_) {
    if (t->rows() != rows_ || t->cols() != cols_)
      fail(Err::ShapeMismatch, "sum of differently shaped symbols");
    ord = std::max(ord, t->order());
    dep_x_ = dep_x_ || t->dep_x();
    dep_xi_ = dep_xi_ || t->dep_xi();
    dep_tau_ = dep_tau_ || t->dep_tau();
  }
  order_ = ord;
  // principal: contributions of maximal order, all carrying data
  std::vector<std::shared_ptr<const HomogComponent>> tops;
  bool ok = true;
  for (const auto& t : terms_) {
    if (t->order() == ord) {
      if (t->principal())
        tops.push_back(t->principal());
      else
        ok = false;
    }
  }
  if (ok && !tops.empty()) {
    auto hc = std::make_shared<HomogComponent>();
    hc->degree = ord;
    hc->rows = rows_;
    hc->cols = cols_;
    double rad = 1.0;
    for (const auto& c : tops) rad = std::max(rad, c->excision_radius);
    hc->excision_radius = rad;
    hc->polar = [tops](const PolarPoint& q, JetSpec s) {
      JetMat acc = tops[0]->polar(q, s);
      for (size_t i = 1; i < tops.size(); ++i) acc = acc + tops[i]->polar(q, s);
      return acc;
    };
    bool all_cart = true;
    for (const auto& c : tops) all_cart = all_cart && bool(c->cartesian);
    if (all_cart)
      hc->cartesian = [tops](const EvalPoint& q, JetSpec s) {
        JetMat acc = tops[0]->cartesian(q, s);
        for (size_t i = 1; i < tops.size(); ++i)
          acc = acc + tops[i]->cartesian(q, s);
        return acc;
      };
    principal_ = hc;
  }
}

std::vector<std::pair<const SymbolNode*, JetSpec>> SumNode::child_specs(
    JetSpec spec) const {
  std::vector<std::pair<const SymbolNode*, JetSpec>> out;
  for (const auto& t : terms_) out.push_back({t.get(), spec});
  return out;
}

JetMat SumNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  JetMat acc(spec, rows_, cols_, ctx.point().x.size());
  for (const auto& t : terms_) acc.accumulate(ctx.jet(t.get(), spec));
  return acc;
}

ScaledNode::ScaledNode(cplx factor, SymbolPtr a, double order_override)
    : SymbolNode(SymbolKind::Scaled,
                 std::isnan(order_override) ? a->order() : order_override,
                 a->rows(), a->cols()),
      factor_(factor),
      a_(std::move(a)) {
  dep_x_ = a_->dep_x();
  dep_xi_ = a_->dep_xi();
  dep_tau_ = a_->dep_tau();
  if (a_->principal()) {
    auto base = a_->principal();
    auto hc = std::make_shared<HomogComponent>(*base);
    cplx f = factor;
    hc->polar = [base, f](const PolarPoint& q, JetSpec s) {
      return base->polar(q, s).scaled(f);
    };
    if (base->cartesian)
      hc->cartesian = [base, f](const EvalPoint& q, JetSpec s) {
        return base->cartesian(q, s).scaled(f);
      };
    else
      hc->cartesian = nullptr;
    principal_ = hc;
  }
}

std::vector<std::pair<const SymbolNode*, JetSpec>> ScaledNode::child_specs(
    JetSpec spec) const {
  return {{a_.get(), spec}};
}

JetMat ScaledNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  JetMat acc(spec, rows_, cols_, ctx.point().x.size());
  acc.accumulate(ctx.jet(a_.get(), spec), factor_);
  return acc;
}

LeibnizNode::LeibnizNode(SymbolPtr a, SymbolPtr b, int N)
    : SymbolNode(SymbolKind::LeibnizProduct, a->order() + b->order(),
                 a->rows(), b->cols()),
      a_(std::move(a)),
      b_(std::move(b)),
      N_(N) {
  if (a_->cols() != b_->rows())
    fail(Err::ShapeMismatch, "composition shapes do not match");
  if (N_ < 0 || N_ > 6) fail(Err::TruncationTooDeep, "need 0 <= N <= 6");
  dep_x_ = a_->dep_x() || b_->dep_x();
  dep_xi_ = a_->dep_xi() || b_->dep_xi();
  dep_tau_ = a_->dep_tau() || b_->dep_tau();
  if (a_->principal() && b_->principal()) {
    auto pa = a_->principal();
    auto pb = b_->principal();
    auto hc = std::make_shared<HomogComponent>();
    hc->degree = pa->degree + pb->degree;
    hc->rows = pa->rows;
    hc->cols = pb->cols;
    hc->excision_radius = std::max(pa->excision_radius, pb->excision_radius);
    hc->polar = [pa, pb](const PolarPoint& q, JetSpec s) {
      return pa->polar(q, s) * pb->polar(q, s);
    };
    if (pa->cartesian && pb->cartesian)
      hc->cartesian = [pa, pb](const EvalPoint& q, JetSpec s) {
        return pa->cartesian(q, s) * pb->cartesian(q, s);
      };
    principal_ = hc;
  }
}

bool LeibnizNode::exact() const { return !a_->dep_xi() || !b_->dep_x(); }

std::vector<std::pair<const SymbolNode*, JetSpec>> LeibnizNode::child_specs(
    JetSpec spec) const {
  const int n = exact() ? 0 : N_;
  return {{a_.get(), JetSpec{spec.n0 + n, spec.n1, spec.n2}},
          {b_.get(), JetSpec{spec.n0, spec.n1 + n, spec.n2}}};
}

JetMat LeibnizNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  const int n = exact() ? 0 : N_;
  JetSpec sa{spec.n0 + n, spec.n1, spec.n2};
  JetSpec sb{spec.n0, spec.n1 + n, spec.n2};
  ctx.jet(a_.get(), sa);
  ctx.jet(b_.get(), sb);  // may upgrade a's slot; re-fetch both below
  const JetMat& ja = ctx.jet(a_.get(), sa);
  const JetMat& jb = ctx.jet(b_.get(), sb);
  JetMat acc(spec, rows_, cols_, ctx.point().x.size());
  double inv_fact = 1.0;
  cplx mi(0.0, -1.0);
  cplx phase(1.0, 0.0);
  for (int alpha = 0; alpha <= n; ++alpha) {
    if (alpha > 0) {
      inv_fact /= alpha;
      phase *= mi;
    }
    accumulate_shifted_product(acc, ja, alpha, jb, alpha, phase * inv_fact);
  }
  return acc;
}

AdjointNode::AdjointNode(SymbolPtr a, int N)
    : SymbolNode(SymbolKind::Adjoint, a->order(), a->cols(), a->rows()),
      a_(std::move(a)),
      N_(N) {
  if (N_ < 0 || N_ > 6) fail(Err::TruncationTooDeep, "need 0 <= N <= 6");
  dep_x_ = a_->dep_x();
  dep_xi_ = a_->dep_xi();
  dep_tau_ = a_->dep_tau();
  if (a_->principal()) {
    auto pa = a_->principal();
    auto hc = std::make_shared<HomogComponent>();
    hc->degree = pa->degree;
    hc->rows = pa->cols;
    hc->cols = pa->rows;
    hc->excision_radius = pa->excision_radius;
    hc->polar = [pa](const PolarPoint& q, JetSpec s) {
      return pa->polar(q, s).conj_transpose();
    };
    if (pa->cartesian)
      hc->cartesian = [pa](const EvalPoint& q, JetSpec s) {
        return pa->cartesian(q, s).conj_transpose();
      };
    principal_ = hc;
  }
}

std::vector<std::pair<const SymbolNode*, JetSpec>> AdjointNode::child_specs(
    JetSpec spec) const {
  const int n = (a_->dep_xi() && a_->dep_x()) ? N_ : 0;
  return {{a_.get(), JetSpec{spec.n0 + n, spec.n1 + n, spec.n2}}};
}

JetMat AdjointNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  const int n = (a_->dep_xi() && a_->dep_x()) ? N_ : 0;
  JetSpec sa{spec.n0 + n, spec.n1 + n, spec.n2};
  const JetMat& ja = ctx.jet(a_.get(), sa);
  JetMat acc(spec, rows_, cols_, ctx.point().x.size());
  double inv_fact = 1.0;
  cplx mi(0.0, -1.0);
  cplx phase(1.0, 0.0);
  for (int alpha = 0; alpha <= n; ++alpha) {
    if (alpha > 0) {
      inv_fact /= alpha;
      phase *= mi;
    }
    accumulate_shifted_adjoint(acc, ja, alpha, phase * inv_fact);
  }
  return acc;
}

ExcisedInverseNode::ExcisedInverseNode(SymbolPtr a, double radius)
    : SymbolNode(SymbolKind::ExcisedInverse, -a->order(), a->rows(),
                 a->cols()),
      a_(std::move(a)),
      radius_(radius) {
  if (a_->rows() != a_->cols())
    fail(Err::ShapeMismatch, "pointwise inverse needs a square symbol");
  dep_x_ = a_->dep_x();
  dep_xi_ = radius_ > 0.0 || a_->dep_xi();
  dep_tau_ = a_->dep_tau();
  if (a_->principal()) {
    auto pa = a_->principal();
    auto hc = std::make_shared<HomogComponent>();
    hc->degree = -pa->degree;
    hc->rows = pa->rows;
    hc->cols = pa->cols;
    hc->excision_radius = std::max(radius_, pa->excision_radius);
    hc->polar = [pa](const PolarPoint& q, JetSpec s) {
      return pa->polar(q, s).inverse();
    };
    if (pa->cartesian)
      hc->cartesian = [pa](const EvalPoint& q, JetSpec s) {
        return pa->cartesian(q, s).inverse();
      };
    principal_ = hc;
  }
}

std::vector<std::pair<const SymbolNode*, JetSpec>>
ExcisedInverseNode::child_specs(JetSpec spec) const {
  return {{a_.get(), spec}};
}

JetMat ExcisedInverseNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  const Eigen::Index batch = ctx.point().x.size();
  if (radius_ > 0.0 && std::abs(ctx.point().xi) <= 0.5 * radius_)
    return JetMat(spec, rows_, cols_, batch);  // inside the excision hole
  JetMat inv = ctx.jet(a_.get(), spec).promoted(spec).inverse();
  if (radius_ <= 0.0) return inv;
  // the cutoff only involves xi: keep its jets collapsed
  Jet jxi = Jet::variable(JetSpec{spec.n0, 1, 1}, batch, ctx.point().xi, 0);
  return inv.mul_scalar(excision_jet(jxi, radius_));
}

PointwiseScalarNode::PointwiseScalarNode(SymbolPtr scalar, SymbolPtr a)
    : SymbolNode(SymbolKind::LeibnizProduct, scalar->order() + a->order(),
                 a->rows(), a->cols()),
      scalar_(std::move(scalar)),
      a_(std::move(a)) {
  if (scalar_->rows() != 1 || scalar_->cols() != 1 || scalar_->dep_x())
    fail(Err::ShapeMismatch,
         "pointwise multiplier must be scalar and x-independent");
  dep_x_ = a_->dep_x();
  dep_xi_ = true;
  dep_tau_ = scalar_->dep_tau() || a_->dep_tau();
  if (a_->principal() && scalar_->principal()) {
    auto pa = a_->principal();
    auto ps = scalar_->principal();
    auto hc = std::make_shared<HomogComponent>();
    hc->degree = pa->degree + ps->degree;
    hc->rows = pa->rows;
    hc->cols = pa->cols;
    hc->excision_radius = std::max(pa->excision_radius, ps->excision_radius);
    hc->polar = [pa, ps](const PolarPoint& q, JetSpec s) {
      return pa->polar(q, s).mul_scalar(ps->polar(q, s).at(0, 0));
    };
    if (pa->cartesian && ps->cartesian)
      hc->cartesian = [pa, ps](const EvalPoint& q, JetSpec s) {
        return pa->cartesian(q, s).mul_scalar(ps->cartesian(q, s).at(0, 0));
      };
    principal_ = hc;
  }
}

std::vector<std::pair<const SymbolNode*, JetSpec>>
PointwiseScalarNode::child_specs(JetSpec spec) const {
  return {{scalar_.get(), spec}, {a_.get(), spec}};
}

JetMat PointwiseScalarNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  JetMat js = ctx.jet(scalar_.get(), spec);
  Jet s = js.at(0, 0).promoted(spec);
  return ctx.jet(a_.get(), spec).promoted(spec).mul_scalar(s);
}

OperatorFamilyNode::OperatorFamilyNode(
    std::shared_ptr<const OperatorFamilyData> d, bool vanishing, double order)
    : SymbolNode(SymbolKind::SmoothingKernel, order, d->N1, d->N0),
      d_(std::move(d)),
      vanishing_(vanishing) {
  dep_x_ = true;
  dep_xi_ = true;
  dep_tau_ = true;
}

LimitClass OperatorFamilyNode::limit_class() const {
  LimitClass lc;
  if (vanishing_) {
    lc.tag = LimitClass::InCalculus;
    lc.datum = constant_symbol(Mat::Zero(rows_, cols_));
    lc.datum_zero = true;
  }
  return lc;
}

JetMat OperatorFamilyNode::eval_jet(EvalContext& ctx, JetSpec spec) const {
  const EvalPoint& p = ctx.point();
  if (spec.n0 > 1 || spec.n2 > 1)
    fail(Err::NonEvaluable,
         "matrix-backed symbol has no xi/tau derivatives; evaluate values "
         "only");
  const int li = d_->find_lambda(p.tau, p.theta);
  if (li < 0)
    fail(Err::NonEvaluable, "matrix-backed symbol off its lambda grid");
  const double kd = std::round(p.xi);
  if (std::abs(kd - p.xi) > 1e-9 || std::abs(kd) > d_->K)
    fail(Err::NonEvaluable, "matrix-backed symbol needs integer |xi| <= K");
  const int k = int(kd);
  const int K = d_->K;
  const Mat& M = d_->matrices[li];
  const Eigen::Index batch = p.x.size();
  JetMat out(spec, d_->N1, d_->N0, batch);
  cplx iunit(0.0, 1.0);
  for (int kp = -K; kp <= K; ++kp) {
    Mat block = M.block((kp + K) * d_->N1, (k + K) * d_->N0, d_->N1, d_->N0);
    if (block.cwiseAbs().maxCoeff() == 0.0) continue;
    const double m = kp - k;
    Arr ph = (iunit * m * p.x.cast<cplx>()).exp();
    double fact = 1.0;
    for (int q = 0; q < spec.n1; ++q) {
      if (q > 0) fact /= q;
      Arr dq = ph * std::pow(iunit * m, q) * fact;
      for (int r = 0; r < d_->N1; ++r)
        for (int c = 0; c < d_->N0; ++c)
          out.at(r, c).coeff(0, q, 0) += block(r, c) * dq;
    }
  }
  return out;
}

}  // namespace nodes

int OperatorFamilyData::find_lambda(double tau, double theta) const {
  for (size_t i = 0; i < lambdas.size(); ++i) {
    const double st = std::max(1.0, std::abs(lambdas[i].tau));
    if (std::abs(lambdas[i].tau - tau) <= 1e-9 * st &&
        std::abs(lambdas[i].theta - theta) <= 1e-9)
      return int(i);
  }
  return -1;
}

// --- builders ---------------------------------------------------------------

SymbolPtr make_generator(GeneratorConfig cfg) {
  return std::make_shared<nodes::Generator>(std::move(cfg));
}

SymbolPtr sum(std::vector<SymbolPtr> terms) {
  if (terms.empty()) fail(Err::ShapeMismatch, "empty sum");
  if (terms.size() == 1) return terms[0];
  return std::make_shared<nodes::SumNode>(std::move(terms));
}

SymbolPtr scale(cplx factor, SymbolPtr a) {
  return std::make_shared<nodes::ScaledNode>(factor, std::move(a));
}

SymbolPtr retag_order(SymbolPtr a, double order) {
  return std::make_shared<nodes::ScaledNode>(cplx(1.0, 0.0), std::move(a),
                                             order);
}

SymbolPtr sub(SymbolPtr a, SymbolPtr b) {
  return sum({std::move(a), scale(cplx(-1.0, 0.0), std::move(b))});
}

SymbolPtr leibniz_node(SymbolPtr a, SymbolPtr b, int N) {
  return std::make_shared<nodes::LeibnizNode>(std::move(a), std::move(b), N);
}

SymbolPtr adjoint_node(SymbolPtr a, int N) {
  return std::make_shared<nodes::AdjointNode>(std::move(a), N);
}

SymbolPtr excised_inverse_node(SymbolPtr a, double radius) {
  return std::make_shared<nodes::ExcisedInverseNode>(std::move(a), radius);
}

SymbolPtr pointwise_scalar_product(SymbolPtr scalar, SymbolPtr a) {
  return std::make_shared<nodes::PointwiseScalarNode>(std::move(scalar),
                                                      std::move(a));
}

SymbolPtr operator_family_symbol(std::shared_ptr<const OperatorFamilyData> d,
                                 bool vanishing, double order) {
  return std::make_shared<nodes::OperatorFamilyNode>(std::move(d), vanishing,
                                                     order);
}

}  // namespace psdo
