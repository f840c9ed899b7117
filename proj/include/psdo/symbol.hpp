#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "psdo/errors.hpp"
#include "psdo/grid.hpp"
#include "psdo/jets.hpp"

namespace psdo {

class SymbolNode;
using SymbolPtr = std::shared_ptr<const SymbolNode>;

enum class SymbolKind {
  ClassicalParam,
  FixedSymbol,
  TaylorHomogeneous,
  SmoothingKernel,
  Sum,
  LeibnizProduct,
  Adjoint,
  ExcisedInverse,
  Scaled,
};

// Evaluation point: x is batched, the remaining variables are scalar.
struct EvalPoint {
  ArrR x;  // batch of spatial points
  double xi = 0.0;
  double tau = 0.0;
  double theta = 0.0;
};

// Session cache for one evaluation point. Nodes are memoized at the largest
// jet spec requested so far; shared subtrees are evaluated once.
class EvalContext {
 public:
  explicit EvalContext(EvalPoint p) : point_(std::move(p)) {}
  const EvalPoint& point() const { return point_; }
  const JetMat& jet(const SymbolNode* node, JetSpec spec);
  // walk the tree once and record the maximal spec each node will serve,
  // so shared subtrees are evaluated exactly once
  void prepare(const SymbolNode* root, JetSpec spec);

 private:
  EvalPoint point_;
  std::unordered_map<const SymbolNode*, JetMat> cache_;
  std::unordered_map<const SymbolNode*, JetSpec> wanted_;
};

// Polar evaluation request near the frequency pole: jets in (rho, x),
// phi = +-1 is the cosphere point, theta passive.
struct PolarPoint {
  ArrR x;
  int phi = 1;
  double rho = 0.0;
  double theta = 0.0;
};
using PolarFn = std::function<JetMat(const PolarPoint&, JetSpec)>;
using CartesianFn = std::function<JetMat(const EvalPoint&, JetSpec)>;

// One homogeneous-in-the-large component of degree `degree`. The polar
// evaluator gives values on the upper unit semicircle in (xi, tau); the
// cartesian evaluator extends it by homogeneity (closed form when supplied).
struct HomogComponent {
  double degree = 0.0;
  int rows = 1, cols = 1;
  PolarFn polar;
  CartesianFn cartesian;  // optional; derived from polar when empty
  double excision_radius = 1.0;

  JetMat eval_cartesian(const EvalPoint& p, JetSpec s) const;
  Mat eval_polar_value(double x, int phi, double rho, double theta) const;
};

struct LimitFamily {
  SymbolPtr symbol;  // tau-independent
  double order = 0.0;
  bool is_zero = false;
  std::optional<double> validated_slope;  // measured decay, when validated
};

struct AngularSymbol {
  int rows = 1, cols = 1;
  std::function<Mat(double x, int phi, double theta)> evaluator;
};

// Structural classification used by the limit-family rules.
struct LimitClass {
  enum Tag {
    InCalculus,      // member with known limit family
    ClassicalPure,   // homogeneous-in-(xi,tau) classical factor, any order
    FixedPositive,   // fixed symbol of positive order (no tau decay)
    Unknown,
  } tag = Unknown;
  // for InCalculus: the limit; for ClassicalPure: the north-pole datum
  SymbolPtr datum;
  bool datum_zero = false;
  double classical_order = 0.0;  // for ClassicalPure
};

class SymbolNode : public std::enable_shared_from_this<SymbolNode> {
 public:
  virtual ~SymbolNode() = default;

  virtual JetMat eval_jet(EvalContext& ctx, JetSpec spec) const = 0;

  SymbolKind kind() const { return kind_; }
  double order() const { return order_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool dep_x() const { return dep_x_; }
  bool dep_xi() const { return dep_xi_; }
  bool dep_tau() const { return dep_tau_; }
  const std::string& name() const { return name_; }

  // cached principal data (leading homogeneous component), when known
  const std::shared_ptr<const HomogComponent>& principal() const {
    return principal_;
  }
  // order-0 member carrying principal data near the pole
  bool weakly_classical() const { return order_ == 0.0 && principal_ != nullptr; }

  virtual LimitClass limit_class() const;
  virtual std::vector<SymbolPtr> children() const { return {}; }

  // the jet specs this node requests from its children when evaluated at
  // `spec`; drives the scheduling pass
  virtual std::vector<std::pair<const SymbolNode*, JetSpec>> child_specs(
      JetSpec spec) const {
    (void)spec;
    return {};
  }

  // finite Fourier expansion in x, when the symbol is a pure x-function:
  // first = lowest mode index, second = coefficients
  virtual const std::pair<int, std::vector<cplx>>* x_modes() const {
    return nullptr;
  }

  // convenience point evaluation
  Mat value(double x, double xi, double tau, double theta) const;

 protected:
  SymbolNode(SymbolKind kind, double order, int rows, int cols)
      : kind_(kind), order_(order), rows_(rows), cols_(cols) {}

  SymbolKind kind_;
  double order_;
  int rows_, cols_;
  bool dep_x_ = false, dep_xi_ = true, dep_tau_ = true;
  std::string name_;
  std::shared_ptr<const HomogComponent> principal_;

  friend class SymbolBuilder;
  friend SymbolPtr scale(cplx, SymbolPtr);
};

// --- leaf builders ----------------------------------------------------------

// generator leaf defined by a closed-form jet evaluator
struct GeneratorConfig {
  std::string name;
  SymbolKind kind = SymbolKind::FixedSymbol;
  double order = 0.0;
  int rows = 1, cols = 1;
  bool dep_x = false, dep_xi = true, dep_tau = false;
  CartesianFn eval;
  std::shared_ptr<const HomogComponent> principal;
  // limit classification of the leaf
  LimitClass limit;
  std::optional<std::pair<int, std::vector<cplx>>> x_modes;
};

SymbolPtr make_generator(GeneratorConfig cfg);

SymbolPtr constant_symbol(const Mat& value);
SymbolPtr constant_symbol(cplx value);

// <xi>^s multiplier (fixed symbol of order s)
SymbolPtr bessel_symbol(double s);
// <xi,tau>^s multiplier (classical parameter-dependent, order s)
SymbolPtr param_bessel_symbol(double s);
// e^{i m x} (fixed symbol of order 0)
SymbolPtr phase_symbol(int m);
// sum of c_m e^{i m x} over |m| <= bandwidth
SymbolPtr band_limited_symbol(const std::vector<cplx>& coeffs_neg_to_pos);
// tau^mu e^{i theta} (classical parameter-dependent, order mu)
SymbolPtr tau_phase_symbol(int mu);
// smooth 0/1 multiplier with transition centered at -1/2; equals the
// indicator of k >= 0 at the integers
SymbolPtr hardy_multiplier_symbol();
// zero-excision multiplier chi(xi / radius-scale)
SymbolPtr excision_symbol(double radius = 1.0);
SymbolPtr scaled_excision_symbol(double c);  // chi(c*xi)
// x-dependent rank-one projection u(x)u(x)^*, u = (cos x/2, sin x/2)
SymbolPtr rotated_projection_symbol();

// --- composite builders -----------------------------------------------------

SymbolPtr sum(std::vector<SymbolPtr> terms);
SymbolPtr scale(cplx factor, SymbolPtr a);
SymbolPtr sub(SymbolPtr a, SymbolPtr b);
// pass-through wrapper certifying a lower order than the bookkeeping shows
// (composition residuals and similar cancellations)
SymbolPtr retag_order(SymbolPtr a, double order);

// truncated composition expansion sum_{alpha<=N} (1/alpha!) dxi^alpha a *
// Dx^alpha b; see calculus.hpp for the public operation with remainder
// bookkeeping.
SymbolPtr leibniz_node(SymbolPtr a, SymbolPtr b, int N);
SymbolPtr adjoint_node(SymbolPtr a, int N);
// chi(xi) * pointwise inverse
SymbolPtr excised_inverse_node(SymbolPtr a, double excision_radius = 1.0);
// pointwise (entrywise matrix) product with an x-independent scalar
// multiplier; exact, used for excision scaling
SymbolPtr pointwise_scalar_product(SymbolPtr scalar_multiplier, SymbolPtr a);

// matrix-family-backed symbol over a fixed lambda grid (see quantize.hpp);
// evaluable only at the stored lambdas and integer xi
struct OperatorFamilyData;
SymbolPtr operator_family_symbol(std::shared_ptr<const OperatorFamilyData> d,
                                 bool vanishing, double order);

// --- small helpers ----------------------------------------------------------

// batch-1 evaluation context
Mat eval_value(const SymbolPtr& a, double x, double xi, double tau,
               double theta);

// values over an x batch
JetMat eval_jet_once(const SymbolPtr& a, const EvalPoint& p, JetSpec s);

}  // namespace psdo
