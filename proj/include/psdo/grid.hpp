#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "psdo/errors.hpp"

namespace psdo {

// Parameter point (tau, theta) in the strip.
struct Lambda {
  double tau = 0.0;
  double theta = 0.0;
};

// The parameter strip [0,inf) x [theta_min, theta_max] together with the
// finite sample sets used for all sweeps.
struct ParameterStrip {
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::vector<double> tau_samples;
  std::vector<double> theta_samples;

  // validates the invariants; throws ConfigInvalid
  void validate() const;

  static ParameterStrip make(double theta_min, double theta_max,
                             std::vector<double> tau,
                             std::vector<double> theta);
  // defaults: tau log-spaced 1..10^3 (4 per decade), 9 equispaced thetas
  static ParameterStrip standard(double theta_min, double theta_max);
};

std::vector<double> log_spaced(double tau_min, double tau_max, int per_decade);
std::vector<double> linear_spaced(double lo, double hi, int n);

// Cartesian product tau_samples x theta_samples, lexicographic.
std::vector<Lambda> sample_lambda(const ParameterStrip& strip);

// Discretization of the circle: n_x equispaced spatial points on [0, 2pi),
// integer frequencies -K..K, fiber dimensions of symbol values.
struct CircleGrid {
  int n_x = 0;
  int K = 0;
  int N0 = 1;
  int N1 = 1;

  void validate() const;
  static CircleGrid make(int K, int N0 = 1, int N1 = 1, int n_x = 0);

  std::vector<double> x_points() const;
  std::vector<double> xi_points() const;  // integers -K..K as doubles
};

// Which estimate family a weighted sup is measured against.
//   Parametric: |D a| <xi,tau>^-(mu - alpha - k)
//   Fixed:      |D a| <xi>^-(mu - alpha)
//   Mixed:      |D a| <xi>^-(mu - alpha) <xi,tau>^-(gamma - k)
enum class SeminormFamily { Parametric, Fixed, Mixed };

struct SeminormSpec {
  int alpha = 0;  // xi-derivative order
  int beta = 0;   // x-derivative order
  int k = 0;      // tau-derivative order
  double mu = 0.0;
  double gamma = 0.0;
  SeminormFamily family = SeminormFamily::Parametric;

  void validate() const;

  static SeminormSpec parametric(double mu, int alpha = 0, int beta = 0,
                                 int k = 0);
  static SeminormSpec fixed(double mu, int alpha = 0, int beta = 0);
  static SeminormSpec mixed(double mu, double gamma, int alpha = 0,
                            int beta = 0, int k = 0);
};

inline double japanese_bracket(double xi) { return std::sqrt(1.0 + xi * xi); }
inline double japanese_bracket(double xi, double tau) {
  return std::sqrt(1.0 + xi * xi + tau * tau);
}

}  // namespace psdo
