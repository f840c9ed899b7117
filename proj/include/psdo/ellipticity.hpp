#pragma once

#include <map>
#include <optional>
#include <string>

#include "psdo/calculus.hpp"
#include "psdo/quantize.hpp"
#include "psdo/symbol.hpp"

namespace psdo {

struct Witness {
  enum Kind { Cartesian, Polar } kind = Cartesian;
  double x = 0.0;
  double xi = 0.0;   // cartesian
  double tau = 0.0;  // cartesian
  int phi = 1;       // polar
  double rho = 0.0;  // polar
  double theta = 0.0;
  double min_singular_value = 0.0;
};

struct Sigma3Certificate {
  int K = 0;
  double sv_K = 0.0;
  double sv_2K = 0.0;
  double drift = 0.0;  // relative change under doubling
  bool pass = false;
};

struct EllipticityReport {
  // "I","II" for the rough test; "S1-principal","S1-angular","S2-limit"
  // for the refined one
  std::map<std::string, bool> verdicts;
  std::optional<Witness> witness;
  double constant = 0.0;  // sup |a^{-1}| <xi>^mu over the test grid
  Sigma3Certificate sigma3;

  bool pass() const {
    for (const auto& [k, v] : verdicts)
      if (!v) return false;
    return !verdicts.empty();
  }
};

struct EllipticityOptions {
  double xi_lower_bound = 0.0;  // the invertibility threshold C
  double sv_threshold = 1e-6;
  double rho_min = 1e-3;
  int rho_samples = 33;
  int sigma3_K = 16;  // quantization size for the doubling certificate
  int leibniz_N = 3;
};

EllipticityReport check_rough(const SymbolPtr& a, double mu,
                              const ParameterStrip& strip,
                              const CircleGrid& grid,
                              const EllipticityOptions& opt = {});

EllipticityReport check_refined(const SymbolPtr& a, const ParameterStrip& strip,
                                const CircleGrid& grid,
                                const EllipticityOptions& opt = {});

// chi(xi) a^{-1}; report must pass
SymbolPtr excised_inverse(const SymbolPtr& a, const EllipticityReport& report,
                          double excision_radius = 1.0);

// truncated Neumann series over the excised inverse, assembled by
// asymptotic summation, plus the limit-family correction
SymbolPtr neumann_parametrix(const SymbolPtr& a, int L,
                             const EllipticityOptions& opt = {});

struct SmoothingInverse {
  SmoothingKernel s;
  double threshold = 0.0;  // first grid tau with ||r|| <= 1/2 for all theta
};

// (1+r)(1+s) = (1+s)(1+r) = 1 exactly on the truncated space past the
// threshold; NeverSmall when ||r|| never drops below 1/2
SmoothingInverse invert_one_plus_smoothing(const SmoothingKernel& r);

struct ParametrixResult {
  SymbolPtr b;  // the corrected Neumann parametrix symbol
  int neumann_depth = 0;
  std::vector<double> tau_threshold_per_theta;
  double tau_threshold = 0.0;  // max over theta
  std::vector<Lambda> lambdas;
  std::vector<double> neumann_residual_norm;  // ||1 - Op(a) Op(b)||
  std::vector<double> residual_left;          // ||1 - B Op(a)||
  std::vector<double> residual_right;         // ||1 - Op(a) B||
  std::vector<double> oracle_gap;             // ||B - Op(a)^{-1}|| in H^0
  SmoothingKernel tail;                       // Op(b) s(lambda), re-encoded
  EllipticityReport report;

  Mat full_inverse(int i) const;  // Op(b)(lambda_i) + tail(lambda_i)
  std::vector<Mat> op_b;          // quantized parametrix per lambda
};

// full pipeline: ellipticity check, excised inverse, Neumann series,
// operator-level correction by the smoothing inverse
ParametrixResult parametrix(const SymbolPtr& a, int L,
                            const ParameterStrip& strip,
                            const CircleGrid& grid,
                            const EllipticityOptions& opt = {});

}  // namespace psdo
