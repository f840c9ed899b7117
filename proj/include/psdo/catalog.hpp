#pragma once

#include <map>
#include <string>

#include "psdo/symbol.hpp"

namespace psdo {

// Named model symbols used by the experiments and the test suites.

// <xi,tau>^{-1} (tau e^{i theta} - <xi>): order 0, weakly classical
SymbolPtr resolvent_reduced_symbol();
// resolvent_reduced + eps e^{ix} <xi,tau>^{-1}
SymbolPtr resolvent_reduced_perturbed_symbol(double eps);
// tau e^{i theta} <xi,tau>^{-1}: classical of order 0
SymbolPtr classical_model_symbol();
// tau e^{i theta} + i xi: order 1
SymbolPtr toeplitz_model_symbol();
// toeplitz_model + eps e^{ix}
SymbolPtr toeplitz_model_perturbed_symbol(double eps);
// e^{i theta} constant (order-0 fixed, theta-dependent)
SymbolPtr theta_phase_symbol();
// arctan(tau) (1 + <xi>^{-1}): converges as tau -> infinity
SymbolPtr arctan_tau_symbol();
// sin(log(1+tau)) (1 + <xi>^{-1}): derivative decays too slowly
SymbolPtr sinlog_tau_symbol();
// chi(xi) arccos(tau/|(xi,tau)|): homogeneous extension of rho
SymbolPtr arccos_taylor_symbol();

struct CatalogParams {
  double epsilon = 0.1;
  int mu = 1;
};

// string-addressable lookup; throws CatalogMiss
SymbolPtr catalog_lookup(const std::string& id, const CatalogParams& p = {});
std::vector<std::string> catalog_ids();

// seeded band-limited x-coefficient symbol: sum c_m e^{imx}, |m| <= bandwidth,
// |c_m| ~ 2^{-|m|}
SymbolPtr random_band_limited_symbol(unsigned long long seed,
                                     int bandwidth = 8);

}  // namespace psdo
