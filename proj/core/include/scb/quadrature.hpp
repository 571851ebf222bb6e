#pragma once

#include <functional>
#include <span>

namespace scb {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod error estimate
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration over consecutive
/// breakpoints (the first and last are the limits). The interval with the
/// largest error estimate is bisected until the summed estimate is below
/// abs_tol or max_intervals is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints, double abs_tol,
                                    int max_intervals = 4000);

}  // namespace scb
