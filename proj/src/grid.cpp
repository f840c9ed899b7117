#include "psdo/grid.hpp"

#include <algorithm>
#include <cmath>

namespace psdo {

const char* err_name(Err e) {
  switch (e) {
    case Err::NonEvaluable: return "NonEvaluable";
    case Err::DerivativeOrderTooHigh: return "DerivativeOrderTooHigh";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::TruncationTooDeep: return "TruncationTooDeep";
    case Err::OrderGapInvalid: return "OrderGapInvalid";
    case Err::NotInCalculus: return "NotInCalculus";
    case Err::ExpansionDiverges: return "ExpansionDiverges";
    case Err::SingularAtPoint: return "SingularAtPoint";
    case Err::SingularLeadingCoefficient: return "SingularLeadingCoefficient";
    case Err::NoPrincipalData: return "NoPrincipalData";
    case Err::ReportFailed: return "ReportFailed";
    case Err::DepthTooLarge: return "DepthTooLarge";
    case Err::NeverSmall: return "NeverSmall";
    case Err::EllipticityFailed: return "EllipticityFailed";
    case Err::SingularToTolerance: return "SingularToTolerance";
    case Err::LambdaMismatch: return "LambdaMismatch";
    case Err::RankMismatch: return "RankMismatch";
    case Err::SpectralHypothesisFailed: return "SpectralHypothesisFailed";
    case Err::ConfigInvalid: return "ConfigInvalid";
    case Err::CatalogMiss: return "CatalogMiss";
  }
  return "Unknown";
}

void ParameterStrip::validate() const {
  const double two_pi = 2.0 * M_PI;
  if (!(0.0 <= theta_min && theta_min <= theta_max && theta_max < two_pi))
    fail(Err::ConfigInvalid, "need 0 <= theta_min <= theta_max < 2*pi");
  if (tau_samples.empty()) fail(Err::ConfigInvalid, "empty tau grid");
  if (tau_samples.front() < 0.0)
    fail(Err::ConfigInvalid, "tau samples must be nonnegative");
  for (size_t i = 1; i < tau_samples.size(); ++i)
    if (!(tau_samples[i] > tau_samples[i - 1]))
      fail(Err::ConfigInvalid, "tau samples must be strictly increasing");
  if (theta_samples.empty()) fail(Err::ConfigInvalid, "empty theta grid");
  for (double t : theta_samples)
    if (t < theta_min - 1e-12 || t > theta_max + 1e-12)
      fail(Err::ConfigInvalid, "theta sample outside [theta_min, theta_max]");
}

ParameterStrip ParameterStrip::make(double theta_min, double theta_max,
                                    std::vector<double> tau,
                                    std::vector<double> theta) {
  ParameterStrip s{theta_min, theta_max, std::move(tau), std::move(theta)};
  s.validate();
  return s;
}

ParameterStrip ParameterStrip::standard(double theta_min, double theta_max) {
  return make(theta_min, theta_max, log_spaced(1.0, 1e3, 4),
              linear_spaced(theta_min, theta_max, 9));
}

std::vector<double> log_spaced(double tau_min, double tau_max,
                               int per_decade) {
  if (!(tau_min > 0.0 && tau_max > tau_min && per_decade >= 1))
    fail(Err::ConfigInvalid, "bad log grid parameters");
  const double decades = std::log10(tau_max / tau_min);
  const int n = int(std::lround(decades * per_decade));
  std::vector<double> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    out.push_back(tau_min * std::pow(10.0, double(i) / per_decade));
  out.back() = tau_max;  // kill rounding drift at the top end
  return out;
}

std::vector<double> linear_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * double(i) / (n - 1);
  return out;
}

std::vector<Lambda> sample_lambda(const ParameterStrip& strip) {
  strip.validate();
  std::vector<Lambda> out;
  out.reserve(strip.tau_samples.size() * strip.theta_samples.size());
  for (double tau : strip.tau_samples)
    for (double theta : strip.theta_samples) out.push_back({tau, theta});
  return out;
}

void CircleGrid::validate() const {
  if (K < 1) fail(Err::ConfigInvalid, "need K >= 1");
  if (n_x < 2 * K + 2) fail(Err::ConfigInvalid, "need n_x >= 2K+2");
  if (N0 < 1 || N1 < 1) fail(Err::ConfigInvalid, "fiber dims must be >= 1");
}

CircleGrid CircleGrid::make(int K, int N0, int N1, int n_x) {
  CircleGrid g{n_x > 0 ? n_x : 2 * K + 2, K, N0, N1};
  g.validate();
  return g;
}

std::vector<double> CircleGrid::x_points() const {
  std::vector<double> out(n_x);
  for (int j = 0; j < n_x; ++j) out[j] = 2.0 * M_PI * j / n_x;
  return out;
}

std::vector<double> CircleGrid::xi_points() const {
  std::vector<double> out(2 * K + 1);
  for (int k = -K; k <= K; ++k) out[k + K] = double(k);
  return out;
}

void SeminormSpec::validate() const {
  if (alpha < 0 || beta < 0 || k < 0)
    fail(Err::ConfigInvalid, "derivative orders must be >= 0");
  if (alpha > 4 || beta > 4 || k > 4)
    fail(Err::DerivativeOrderTooHigh,
         "finite differences above order 4 are unreliable");
}

SeminormSpec SeminormSpec::parametric(double mu, int alpha, int beta, int k) {
  SeminormSpec s{alpha, beta, k, mu, 0.0, SeminormFamily::Parametric};
  s.validate();
  return s;
}

SeminormSpec SeminormSpec::fixed(double mu, int alpha, int beta) {
  SeminormSpec s{alpha, beta, 0, mu, 0.0, SeminormFamily::Fixed};
  s.validate();
  return s;
}

SeminormSpec SeminormSpec::mixed(double mu, double gamma, int alpha, int beta,
                                 int k) {
  SeminormSpec s{alpha, beta, k, mu, gamma, SeminormFamily::Mixed};
  s.validate();
  return s;
}

}  // namespace psdo
