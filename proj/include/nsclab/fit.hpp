#pragma once

#include <span>

namespace nsclab {

/// Least-squares line through (log(1+t), log value) over a time window.
struct DecayFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double t_min = 0;
  double t_max = 0;
  int n_points = 0;
};

/// Uses the samples with t_min <= t <= t_max. Throws WindowTooSmall when fewer
/// than 8 samples fall in the window or t_max < 10 t_min, and NonPositiveValue
/// when a value in the window is not positive.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_min,
                   double t_max);

/// Whole series as the window.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values);

}  // namespace nsclab
