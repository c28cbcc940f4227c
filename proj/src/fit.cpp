#include "nsclab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsclab/errors.hpp"

namespace nsclab {

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, double t_min,
                   double t_max) {
  if (times.size() != values.size()) throw std::invalid_argument("fit_decay: times and values differ in length");
  if (!(t_min >= 0.0) || !(t_max >= 10.0 * t_min) || !(t_max > 0.0)) {
    throw WindowTooSmall("fit_decay: window [" + std::to_string(t_min) + ", " + std::to_string(t_max) +
                         "] spans less than a decade");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    if (!(values[i] > 0.0)) {
      throw NonPositiveValue("fit_decay: value " + std::to_string(values[i]) + " at t = " + std::to_string(times[i]));
    }
    x.push_back(std::log1p(times[i]));
    y.push_back(std::log(values[i]));
  }
  const auto n = static_cast<int>(x.size());
  if (n < 8) throw WindowTooSmall("fit_decay: " + std::to_string(n) + " samples in window, need 8");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.stderr_slope = std::sqrt(sse / (n - 2) / sxx);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.n_points = n;
  return fit;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values) {
  if (times.empty()) throw WindowTooSmall("fit_decay: empty series");
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  return fit_decay(times, values, *lo, *hi);
}

}  // namespace nsclab
