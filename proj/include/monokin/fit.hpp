/// @file fit.hpp
/// @brief Least-squares line fits with 95% slope intervals.
#pragma once

#include <span>

namespace monokin {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// 95% Student-t interval for the slope; NaN with fewer than three points.
  double slope_lo = 0.0;
  double slope_hi = 0.0;
};

/// Fit y = slope * x + intercept. Needs at least two points with distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit log y = slope * log x + intercept. All inputs must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace monokin
