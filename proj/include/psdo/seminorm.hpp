#pragma once

#include "psdo/grid.hpp"
#include "psdo/symbol.hpp"

namespace psdo {

// Numerical sup over the sampled grid of the weighted derivative magnitude
// |dxi^alpha dx^beta dtau^k a| * weight(spec). Derivatives are central
// finite differences with relative step 1e-3; noise floor is about 1e-6.
// Deterministic given the grid.
double estimate_seminorm(const SymbolPtr& a, const SeminormSpec& spec,
                         const ParameterStrip& strip, const CircleGrid& grid);

// Same sup restricted to one lambda (used by decay fits).
double estimate_seminorm_at(const SymbolPtr& a, const SeminormSpec& spec,
                            const Lambda& lambda, const CircleGrid& grid);

// Weighted sup of |a - b| at one lambda with the spec's weight (no
// derivatives): used for limit-family decay measurements.
double weighted_distance_at(const SymbolPtr& a, const SymbolPtr& b,
                            const SeminormSpec& spec, const Lambda& lambda,
                            const CircleGrid& grid);

// serial reference implementation, kept for the kernel comparison tests
double estimate_seminorm_serial(const SymbolPtr& a, const SeminormSpec& spec,
                                const ParameterStrip& strip,
                                const CircleGrid& grid);

double fd_step_xi(double xi);
double fd_step_tau(double xi, double tau);

}  // namespace psdo
