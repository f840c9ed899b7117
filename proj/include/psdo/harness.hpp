#pragma once

#include <string>

#include "psdo/catalog.hpp"
#include "psdo/report.hpp"

namespace psdo {

struct ExperimentConfig {
  std::string experiment;
  // symbol identifiers and parameters
  std::string a = "resolvent-reduced-perturbed";
  std::string b = "bessel-inv";
  std::string p = "hardy";
  std::string p1;
  std::string b_aux = "negative-bessel";  // auxiliary for the block split
  double epsilon = 0.1;
  int mu = 1;
  double sobolev_s = 0.0;
  double delta = 0.5;
  int leibniz_N = 3;
  int neumann_L = 3;
  bool remark = false;
  // strip
  double theta_min = M_PI / 2.0;
  double theta_max = 3.0 * M_PI / 2.0;
  int theta_samples = 9;
  std::vector<double> theta_list;  // explicit rays override the samples
  double tau_min = 1.0;
  double tau_max = 1e3;
  int per_decade = 4;
  // grid
  int K = 64;
  int n_x = 0;  // 0: derived as 2K+2
  // misc
  unsigned long long seed = 42;
  std::string out;  // directory; empty writes nothing

  static ExperimentConfig defaults_for(const std::string& experiment);
  static ExperimentConfig from_json(const json& j);
  json to_json_echo() const;
  void validate() const;
  void apply_env();  // PSIDO_SEED, PSIDO_GRID_K, PSIDO_OUT

  ParameterStrip strip() const;
  CircleGrid grid(int n0, int n1) const;
  CatalogParams catalog_params() const {
    return CatalogParams{epsilon, mu};
  }
};

ReportEnvelope run(const ExperimentConfig& config);
ReportEnvelope sweep(const ExperimentConfig& config);

// composition-error ladder used by the compose experiment and the
// acceptance suite: interior-annulus operator-norm error of the truncated
// expansion against the matrix oracle, per truncation order
std::vector<double> compose_error_ladder(const SymbolPtr& a,
                                         const SymbolPtr& b, int n_max,
                                         const Lambda& lam,
                                         const CircleGrid& grid);

}  // namespace psdo
