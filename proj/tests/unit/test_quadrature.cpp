#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "nsclab/errors.hpp"
#include "nsclab/quadrature.hpp"

using namespace nsclab;

TEST_CASE("Gauss-Legendre 16 rule") {
  const auto& gl = quad::gauss_legendre16();
  double wsum = 0.0;
  for (int i = 0; i < quad::kNodes; ++i) wsum += gl.w[i];
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
  // Exact for degree 31.
  double m30 = 0.0;
  for (int i = 0; i < quad::kNodes; ++i) m30 += gl.w[i] * std::pow(gl.x[i], 30);
  CHECK(m30 == doctest::Approx(2.0 / 31.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration") {
  const std::vector<double> bp{0.0, 1.0};
  auto [v, e] = quad::integrate([](double x) { return std::sqrt(x); }, bp);
  CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(e < 1e-10);

  const std::vector<double> bp2{0.0, 100.0};
  quad::Options o;
  o.max_width = std::numbers::pi / 50.0;
  auto [v2, e2] = quad::integrate([](double x) { return std::cos(50.0 * x) * std::exp(-x / 10.0); }, bp2, o);
  const double exact = (0.1 + std::exp(-10.0) * (50.0 * std::sin(5000.0) - 0.1 * std::cos(5000.0))) / (0.01 + 2500.0);
  CHECK(std::abs(v2 - exact) < 1e-12);
  (void)e2;

  // Vector form with one identically zero component.
  const quad::VectorIntegrand f = [](double x, Eigen::Ref<Eigen::VectorXd> out) {
    out(0) = x * x;
    out(1) = 0.0;
    out(2) = std::exp(x);
  };
  const std::vector<double> bp3{0.0, 0.5, 2.0};
  const auto r = quad::integrate(f, 3, bp3);
  CHECK(r.value(0) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(r.value(1) == 0.0);
  CHECK(r.value(2) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
  const auto again = quad::integrate_on(r.panels, f, 3);
  CHECK(again(2) == doctest::Approx(r.value(2)).epsilon(1e-14));

  quad::Options tiny;
  tiny.max_panels = 4;
  tiny.rel_tol = 1e-15;
  CHECK_THROWS_AS(quad::integrate([](double x) { return std::abs(x - 0.3141); }, bp, tiny), QuadratureFailure);
}
