#pragma once

// Concrete expression nodes. Internal header shared by the calculus and
// taylor translation units; user code goes through symbol.hpp builders.

#include <limits>

#include "psdo/symbol.hpp"

namespace psdo {

struct OperatorFamilyData {
  std::vector<Lambda> lambdas;
  std::vector<Mat> matrices;  // ((2K+1)*N1) x ((2K+1)*N0) per lambda
  int K = 0;
  int N0 = 1;
  int N1 = 1;

  int find_lambda(double tau, double theta) const;  // -1 when absent
};

namespace nodes {

class Generator : public SymbolNode {
 public:
  explicit Generator(GeneratorConfig cfg);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  LimitClass limit_class() const override { return cfg_.limit; }
  const std::pair<int, std::vector<cplx>>* x_modes() const override {
    return cfg_.x_modes ? &*cfg_.x_modes : nullptr;
  }

 private:
  GeneratorConfig cfg_;
};

class SumNode : public SymbolNode {
 public:
  std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const override;
  explicit SumNode(std::vector<SymbolPtr> terms);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  std::vector<SymbolPtr> children() const override { return terms_; }

 private:
  std::vector<SymbolPtr> terms_;
};

class ScaledNode : public SymbolNode {
 public:
  std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const override;
  // order_override re-tags the order when a cancellation is certified
  // (for instance composition residuals); NaN keeps the child's order
  ScaledNode(cplx factor, SymbolPtr a,
             double order_override = std::numeric_limits<double>::quiet_NaN());
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  std::vector<SymbolPtr> children() const override { return {a_}; }
  cplx factor() const { return factor_; }

 private:
  cplx factor_;
  SymbolPtr a_;
};

class LeibnizNode : public SymbolNode {
 public:
  std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const override;
  LeibnizNode(SymbolPtr a, SymbolPtr b, int N);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  std::vector<SymbolPtr> children() const override { return {a_, b_}; }
  int truncation() const { return N_; }
  const SymbolPtr& left() const { return a_; }
  const SymbolPtr& right() const { return b_; }
  // expansion is exact when one side lacks the differentiated variable
  bool exact() const;

 private:
  SymbolPtr a_, b_;
  int N_;
};

class AdjointNode : public SymbolNode {
 public:
  std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const override;
  AdjointNode(SymbolPtr a, int N);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  std::vector<SymbolPtr> children() const override { return {a_}; }
  int truncation() const { return N_; }

 private:
  SymbolPtr a_;
  int N_;
};

// radius <= 0 means a plain pointwise inverse with no excision factor
class ExcisedInverseNode : public SymbolNode {
 public:
  std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const override;
  ExcisedInverseNode(SymbolPtr a, double radius);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  std::vector<SymbolPtr> children() const override { return {a_}; }
  double radius() const { return radius_; }

 private:
  SymbolPtr a_;
  double radius_;
};

class PointwiseScalarNode : public SymbolNode {
 public:
  std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const override;
  PointwiseScalarNode(SymbolPtr scalar, SymbolPtr a);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  std::vector<SymbolPtr> children() const override { return {scalar_, a_}; }
  const SymbolPtr& multiplier() const { return scalar_; }
  const SymbolPtr& body() const { return a_; }

 private:
  SymbolPtr scalar_, a_;
};

class OperatorFamilyNode : public SymbolNode {
 public:
  OperatorFamilyNode(std::shared_ptr<const OperatorFamilyData> d,
                     bool vanishing, double order);
  JetMat eval_jet(EvalContext& ctx, JetSpec spec) const override;
  LimitClass limit_class() const override;
  const std::shared_ptr<const OperatorFamilyData>& data() const { return d_; }
  bool vanishing() const { return vanishing_; }

 private:
  std::shared_ptr<const OperatorFamilyData> d_;
  bool vanishing_;
};

class TaylorHomogeneousNode;  // defined with the taylor machinery

}  // namespace nodes

// shared helper: r^degree * N(x, sign(xi), arccos(tau/r), theta)
JetMat homogeneous_extend_eval(const PolarFn& polar, double degree, int rows,
                               int cols, const EvalPoint& p, JetSpec spec);

}  // namespace psdo
