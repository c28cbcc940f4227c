#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nsclab::quad {

inline constexpr int kNodes = 16;

/// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, kNodes> x;
  std::array<double, kNodes> w;
};
const GaussLegendre16& gauss_legendre16();

/// Writes the integrand components at x into out.
using VectorIntegrand = std::function<void(double x, Eigen::Ref<Eigen::VectorXd> out)>;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_panels = 400000;
  /// Upper bound on the width of any panel (oscillation resolution).
  double max_width = std::numeric_limits<double>::infinity();
};

struct Panel {
  double a, b;
};

struct Result {
  Eigen::VectorXd value;
  Eigen::VectorXd error;
  std::vector<Panel> panels;  // leaf panels of the final partition
  std::size_t evaluations = 0;
};

/// Globally adaptive panel Gauss-Legendre on [breakpoints.front(), breakpoints.back()].
/// Each panel's error is |GL16(panel) - GL16(left) - GL16(right)|; the worst
/// panel is bisected until every component satisfies
/// error <= max(abs_tol, rel_tol * |value|). Throws QuadratureFailure when
/// the panel budget runs out first.
Result integrate(const VectorIntegrand& f, int components, std::span<const double> breakpoints,
                 const Options& opts = {});

/// Scalar convenience overload.
std::pair<double, double> integrate(const std::function<double(double)>& f,
                                    std::span<const double> breakpoints, const Options& opts = {});

/// Applies GL16 on each of the given panels (no adaptivity).
Eigen::VectorXd integrate_on(std::span<const Panel> panels, const VectorIntegrand& f,
                             int components);

}  // namespace nsclab::quad
