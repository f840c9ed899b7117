#pragma once

#include "psdo/symbol.hpp"

namespace psdo {

// Function on the punctured upper semicircle in polar form, together with
// its Taylor coefficients a_j(x, phi, theta) at the frequency pole rho = 0.
struct TaylorData {
  int rows = 1, cols = 1;
  PolarFn evaluator;  // jets in (rho, x)
  std::vector<std::function<Mat(double x, int phi, double theta)>>
      coefficients;
  int depth = 0;
};

struct TaylorVerification {
  std::vector<double> x_samples{0.0};
  std::vector<int> phis{1, -1};
  std::vector<double> thetas{0.0};
  std::vector<double> rhos{0.1, 0.05, 0.025};
};

// coefficients extracted by Richardson-extrapolated divided differences at
// rho = 2^-m rho0; remainder slopes certified, else ExpansionDiverges
TaylorData taylor_expand_northpole(const PolarFn& f, int rows, int cols, int L,
                                   const TaylorVerification& v = {});

// remainder slope of f - sum_{j<=ell} rho^j a_j for each ell <= L, fitted
// over v.rhos and maximized over the sample points (worst slope per ell)
std::vector<double> taylor_remainder_slopes(const PolarFn& f,
                                            const TaylorData& t, int L,
                                            const TaylorVerification& v = {});

// formal-series inverse; pointwise invertibility checked on the grid
TaylorData invert_taylor(const TaylorData& t, const TaylorVerification& v = {});

// chi(xi) * homogeneous degree-0 extension of the polar data
SymbolPtr homog_extend(const TaylorData& t, double excision_radius = 1.0);

// leading Taylor coefficient of the principal data
AngularSymbol angular_symbol(const SymbolPtr& a);

// TaylorData for a literal polar closed form with known coefficients
TaylorData taylor_from_closed_form(
    PolarFn f, int rows, int cols,
    std::vector<std::function<Mat(double, int, double)>> coefficients);

// the model evaluator cos(rho) e^{i theta} - sin(rho)
PolarFn reduced_resolvent_polar();
// the evaluator rho itself
PolarFn rho_polar();

}  // namespace psdo
