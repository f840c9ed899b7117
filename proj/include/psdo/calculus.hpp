#pragma once

#include "psdo/grid.hpp"
#include "psdo/symbol.hpp"

namespace psdo {

struct LeibnizResult {
  SymbolPtr symbol;     // truncated expansion
  SymbolPtr remainder;  // exact-composition minus expansion, when available
  double remainder_order = 0.0;
  bool exact = false;  // the expansion already equals the composition
};

// sum_{alpha<=N} (1/alpha!) dxi^alpha a . Dx^alpha b, with remainder
// bookkeeping when a closed-form composition exists
LeibnizResult leibniz_product(const SymbolPtr& a, const SymbolPtr& b, int N);
// expansion plus tracked remainder (exact composition when available)
SymbolPtr leibniz_with_remainder(const SymbolPtr& a, const SymbolPtr& b,
                                 int N);

SymbolPtr adjoint_symbol(const SymbolPtr& a, int N);

struct AsymptoticSum {
  SymbolPtr symbol;
  std::vector<double> cutoffs;  // chosen excision scales c_k
};

// components of strictly decreasing integer-step orders mu, mu-1, ...
AsymptoticSum asymptotic_sum(const std::vector<SymbolPtr>& components);

// structural limit family; throws NotInCalculus when the tree cannot be
// classified. When strip+grid are provided the result is cross-validated:
// the order-(mu+1)-weighted distance must decay along the tau grid, and the
// measured slope is recorded on the result.
struct LimitOptions {
  const ParameterStrip* strip = nullptr;
  const CircleGrid* grid = nullptr;
  int leibniz_truncation = 3;
};
LimitFamily limit_family(const SymbolPtr& a, const LimitOptions& opt = {});

// decay of the weighted distance ||a(tau,.) - lf|| over the tau grid
struct DecayMeasurement {
  std::vector<double> taus;
  std::vector<double> distances;  // max over theta samples
  double slope = 0.0;
};
DecayMeasurement measure_limit_decay(const SymbolPtr& a, const LimitFamily& lf,
                                     const ParameterStrip& strip,
                                     const CircleGrid& grid);

struct MembershipVerdict {
  bool pass = false;
  double measured_bound = 0.0;  // sup (1+tau)^{1+delta} |d_tau a| on top taus
  double slope = 0.0;           // fitted decay of |d_tau a|
  SymbolPtr limit;              // quadrature limit, when pass
  double quad_error = 0.0;
};

// sufficient membership test from tau-derivative decay; fail is a verdict,
// not an error
MembershipVerdict membership_by_derivative_decay(const SymbolPtr& a,
                                                 double delta,
                                                 const ParameterStrip& strip,
                                                 const CircleGrid& grid);

// pointwise inverse without excision (for xi-independent limit data)
SymbolPtr pointwise_inverse_node(SymbolPtr a);

// child evaluated at a frozen tau (yields a tau-independent symbol)
SymbolPtr frozen_tau_symbol(SymbolPtr a, double tau);

}  // namespace psdo
