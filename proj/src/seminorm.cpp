#include "psdo/seminorm.hpp"

#include <omp.h>

#include <cmath>

#include "psdo/parallel.hpp"

namespace psdo {

namespace par {

namespace {
bool g_enabled = true;
}

bool enabled() { return g_enabled; }
void set_enabled(bool on) { g_enabled = on; }
int max_threads() { return omp_get_max_threads(); }

void for_index_serial(std::size_t n,
                      const std::function<void(std::size_t)>& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

void for_index(std::size_t n, const std::function<void(std::size_t)>& f) {
  if (!g_enabled) {
    for_index_serial(n, f);
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < (long long)n; ++i) f(std::size_t(i));
}

double max_index_serial(std::size_t n,
                        const std::function<double(std::size_t)>& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(i));
  return m;
}

double max_index(std::size_t n, const std::function<double(std::size_t)>& f) {
  if (!g_enabled) return max_index_serial(n, f);
  double m = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : m)
  for (long long i = 0; i < (long long)n; ++i)
    m = std::max(m, f(std::size_t(i)));
  return m;
}

}  // namespace par

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // divide by h^order afterwards
};

// centered stencils: 4th-order accurate for orders 1 and 2,
// 2nd-order for 3 and 4
Stencil stencil(int order) {
  switch (order) {
    case 0: return {{0}, {1.0}};
    case 1: return {{-2, -1, 1, 2}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}};
    case 2:
      return {{-2, -1, 0, 1, 2},
              {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}};
    case 3: return {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
    case 4: return {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}};
  }
  fail(Err::DerivativeOrderTooHigh, "stencil order above 4");
}

double weight_for(const SeminormSpec& s, double xi, double tau) {
  switch (s.family) {
    case SeminormFamily::Parametric:
      return std::pow(japanese_bracket(xi, tau), -(s.mu - s.alpha - s.k));
    case SeminormFamily::Fixed:
      return std::pow(japanese_bracket(xi), -(s.mu - s.alpha));
    case SeminormFamily::Mixed:
      return std::pow(japanese_bracket(xi), -(s.mu - s.alpha)) *
             std::pow(japanese_bracket(xi, tau), -(s.gamma - s.k));
  }
  return 1.0;
}

// weighted sup of the finite-difference derivative at one (xi, lambda),
// over the x grid
double fd_point_sup(const SymbolPtr& a, const SeminormSpec& spec, double xi,
                    const Lambda& lam, const std::vector<double>& xs) {
  const Stencil sx = stencil(spec.beta);
  const Stencil sxi = stencil(spec.alpha);
  const Stencil stau = stencil(spec.k);
  const double hx = 1e-3;
  const double hxi = fd_step_xi(xi);
  const double htau = fd_step_tau(xi, lam.tau);

  // x offsets are folded into one batched evaluation
  const int nx = int(xs.size());
  const int nsx = int(sx.offsets.size());
  ArrR xb(nx * nsx);
  for (int j = 0; j < nsx; ++j)
    for (int i = 0; i < nx; ++i) xb[j * nx + i] = xs[i] + sx.offsets[j] * hx;

  Mat acc_example = a->value(xs.empty() ? 0.0 : xs[0], xi, lam.tau, lam.theta);
  const int rows = int(acc_example.rows()), cols = int(acc_example.cols());
  std::vector<Mat> acc(nx, Mat::Zero(rows, cols));

  for (size_t ii = 0; ii < sxi.offsets.size(); ++ii)
    for (size_t kk = 0; kk < stau.offsets.size(); ++kk) {
      EvalPoint p{xb, xi + sxi.offsets[ii] * hxi,
                  lam.tau + stau.offsets[kk] * htau, lam.theta};
      JetMat v = eval_jet_once(a, p, JetSpec{1, 1, 1});
      const double w = sxi.weights[ii] * stau.weights[kk];
      for (int j = 0; j < nsx; ++j) {
        const double wj = w * sx.weights[j];
        for (int i = 0; i < nx; ++i) {
          for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
              acc[i](r, c) += wj * v.at(r, c).value()(j * nx + i);
        }
      }
    }

  const double scale = std::pow(hxi, spec.alpha) * std::pow(hx, spec.beta) *
                       std::pow(htau, spec.k);
  const double w = weight_for(spec, xi, lam.tau);
  double sup = 0.0;
  for (int i = 0; i < nx; ++i)
    sup = std::max(sup, acc[i].cwiseAbs().maxCoeff() / scale * w);
  return sup;
}

double run_seminorm(const SymbolPtr& a, const SeminormSpec& spec,
                    const std::vector<Lambda>& lambdas, const CircleGrid& grid,
                    bool parallel) {
  spec.validate();
  grid.validate();
  const auto xs = grid.x_points();
  const auto xis = grid.xi_points();
  const std::size_t n = lambdas.size() * xis.size();
  auto work = [&](std::size_t idx) {
    const Lambda& lam = lambdas[idx / xis.size()];
    const double xi = xis[idx % xis.size()];
    return fd_point_sup(a, spec, xi, lam, xs);
  };
  return parallel ? par::max_index(n, work) : par::max_index_serial(n, work);
}

}  // namespace

double fd_step_xi(double xi) { return 1e-3 * japanese_bracket(xi); }
double fd_step_tau(double xi, double tau) {
  return 1e-3 * japanese_bracket(xi, tau);
}

double estimate_seminorm(const SymbolPtr& a, const SeminormSpec& spec,
                         const ParameterStrip& strip, const CircleGrid& grid) {
  return run_seminorm(a, spec, sample_lambda(strip), grid, true);
}

double estimate_seminorm_serial(const SymbolPtr& a, const SeminormSpec& spec,
                                const ParameterStrip& strip,
                                const CircleGrid& grid) {
  return run_seminorm(a, spec, sample_lambda(strip), grid, false);
}

double estimate_seminorm_at(const SymbolPtr& a, const SeminormSpec& spec,
                            const Lambda& lambda, const CircleGrid& grid) {
  return run_seminorm(a, spec, {lambda}, grid, true);
}

double weighted_distance_at(const SymbolPtr& a, const SymbolPtr& b,
                            const SeminormSpec& spec, const Lambda& lambda,
                            const CircleGrid& grid) {
  const auto xs = grid.x_points();
  const auto xis = grid.xi_points();
  ArrR xb = Eigen::Map<const ArrR>(xs.data(), xs.size());
  return par::max_index(xis.size(), [&](std::size_t i) {
    const double xi = xis[i];
    EvalPoint p{xb, xi, lambda.tau, lambda.theta};
    JetMat va = eval_jet_once(a, p, JetSpec{1, 1, 1});
    JetMat vb = eval_jet_once(b, p, JetSpec{1, 1, 1});
    double m = 0.0;
    for (int r = 0; r < va.rows(); ++r)
      for (int c = 0; c < va.cols(); ++c)
        m = std::max(m,
                     (va.at(r, c).value() - vb.at(r, c).value()).abs().maxCoeff());
    return m * weight_for(spec, xi, lambda.tau);
  });
}

}  // namespace psdo
