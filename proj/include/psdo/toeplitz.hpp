#pragma once

#include "psdo/ellipticity.hpp"

namespace psdo {

struct ProjectionSymbol {
  SymbolPtr p;  // order-0 projection symbol
  bool exact = false;  // quantized matrix exactly idempotent
  std::array<int, 2> range_rank_profile{0, 0};  // sigma_1 rank at phi = +1, -1
};

// smooth 0/1 multiplier hitting the nonnegative-frequency indicator at the
// integers; quantizes exactly idempotent
ProjectionSymbol make_hardy_projection(int K);
ProjectionSymbol make_rotated_projection();
ProjectionSymbol make_identity_projection(int fibers = 1);
// wrap a general order-0 projection symbol; rank profile measured from the
// principal data, exactness left cleared
ProjectionSymbol make_projection(SymbolPtr p);

struct OrderReductionPair {
  SymbolPtr R;  // order -mu, classical
  SymbolPtr S;  // order +mu, exact inverse of R at every lambda
  double mu = 1.0;
};
OrderReductionPair make_order_reduction(double mu);

// R # P # S with the reduction pair; exact for multiplier projections
ProjectionSymbol tilde_conjugate(const ProjectionSymbol& P,
                                 const OrderReductionPair& RS);

// quantized compression P1 Op(A) P0 restricted between range bases
struct ToeplitzOperator {
  SymbolPtr A;
  ProjectionSymbol P0, P1;
  std::vector<Lambda> lambdas;
  std::vector<Mat> compressed;  // Q1^H (P1 Op(A) P0) Q0
  std::vector<Mat> basis0, basis1;
};

ToeplitzOperator compress_toeplitz(const SymbolPtr& A,
                                   const ProjectionSymbol& P0,
                                   const ProjectionSymbol& P1,
                                   const ParameterStrip& strip,
                                   const CircleGrid& grid);

// three compressed invertibility conditions; RankMismatch when the range
// ranks differ at some cosphere point
EllipticityReport toeplitz_ellipticity(const SymbolPtr& A,
                                       const ProjectionSymbol& P0,
                                       const ProjectionSymbol& P1,
                                       const ParameterStrip& strip,
                                       const CircleGrid& grid,
                                       const EllipticityOptions& opt = {});

struct ToeplitzParametrix {
  ToeplitzOperator parametrix;  // compressed inverse between the ranges
  std::vector<double> tau_threshold_per_theta;
  double tau_threshold = 0.0;
  std::vector<double> residual_left;   // ||B'A' - P0|| on the truncated space
  std::vector<double> residual_right;  // ||A'B' - P1||
  std::vector<double> chain_residual;  // ||S P~1 R - P1||
  std::vector<Mat> full_inverse;       // P0 B R P1 as full-space matrices
};

ToeplitzParametrix toeplitz_parametrix(const SymbolPtr& A,
                                       const ProjectionSymbol& P0,
                                       const ProjectionSymbol& P1,
                                       const OrderReductionPair& RS,
                                       const ParameterStrip& strip,
                                       const CircleGrid& grid,
                                       const EllipticityOptions& opt = {});

struct SpectralHypothesisReport {
  bool pass = false;
  std::optional<Witness> witness;  // theta is the offending ray direction
};

// fibrewise spectrum of the compressed principal symbol against the sector
SpectralHypothesisReport check_spectral_hypothesis(const SymbolPtr& A_fixed,
                                                   int mu,
                                                   const ProjectionSymbol& P,
                                                   const ParameterStrip& strip,
                                                   const CircleGrid& grid,
                                                   double sv_threshold = 1e-6);

struct ResolventRecord {
  std::vector<Lambda> lambdas;
  std::vector<cplx> z_samples;         // tau^mu e^{i theta}
  std::vector<double> inverse_norms;   // H^s norm on range(P)
  std::vector<double> residual_left;   // toeplitz identities per lambda
  std::vector<double> residual_right;
  std::vector<double> oracle_gap;      // parametrix vs compressed inverse
  std::vector<double> domain_gains;    // H^s -> H^{s+mu} bound per lambda
  struct Ray {
    double theta = 0.0;
    double fitted_slope = 0.0;
    double C_fit = 0.0;
  };
  std::vector<Ray> rays;
  double tau_threshold = 0.0;
  double domain_gain = 0.0;  // max over the grid
  double sobolev_s = 0.0;
};

// resolvent of the compressed operator P A P along the sampled rays;
// A_fixed is a fixed classical symbol of positive integer order mu
ResolventRecord resolvent_pipeline(const SymbolPtr& A_fixed, int mu,
                                   const ProjectionSymbol& P,
                                   const ParameterStrip& strip,
                                   const CircleGrid& grid, double sobolev_s,
                                   const EllipticityOptions& opt = {});

struct RemarkIdentityResult {
  double max_identity_residual = 0.0;  // block-splitting identity defect
  bool spectral_equivalence = false;   // sector verdicts split as blocks
  bool sector_free_compressed = false;
  bool sector_free_auxiliary = false;
  bool sector_free_combined = false;
};

// block-diagonal splitting P(tau^mu - A)P + (1-P)(tau^mu - B)(1-P) =
// tau^mu - C with C = PAP + (1-P)B(1-P), checked on the truncated space
RemarkIdentityResult remark_identity_check(const SymbolPtr& A_fixed,
                                           const SymbolPtr& B_aux, int mu,
                                           const ProjectionSymbol& P,
                                           const std::vector<double>& taus,
                                           const ParameterStrip& strip,
                                           const CircleGrid& grid);

// orthonormal basis of the column span, pivot tolerance 1e-10
Mat range_basis(const Mat& projection_matrix);

// H^s operator norm of M restricted to the D_s-image of span(Q)
double restricted_sobolev_norm(const Mat& M, const Mat& Q, int K, int N,
                               double s, double t);

}  // namespace psdo
