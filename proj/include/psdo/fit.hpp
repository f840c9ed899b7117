#pragma once

#include <cmath>
#include <vector>

namespace psdo {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
};

// least-squares line through (x_i, y_i)
inline FitResult fit_line(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double d = n * sxx - sx * sx;
  FitResult f;
  f.slope = (n * sxy - sx * sy) / d;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

// slope of log(y) against log(x); zero values are floored at 1e-300
inline FitResult fit_loglog(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(std::max(ys[i], 1e-300));
  }
  return fit_line(lx, ly);
}

}  // namespace psdo
