#include <cmath>
#include <random>

#include "doctest.h"
#include "nsclab/errors.hpp"
#include "nsclab/params.hpp"

using namespace nsclab;

TEST_CASE("validate accepts defaults and lists violations") {
  CHECK(validate(PhysicalParams::defaults()).empty());

  PhysicalParams p;
  p.eta_tilde = -1.0;
  auto v = validate(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "eta_tilde+(2/3)nu_tilde >= 0");
  CHECK(v[0].value == doctest::Approx(-1.0 / 3.0));

  p = PhysicalParams::defaults();
  p.gamma = 1.0;
  v = validate(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].constraint == "gamma > 1");

  p.R = -1;
  p.tau = 0;
  CHECK(validate(p).size() == 3);
  CHECK_THROWS_AS(normalize(p), InvalidParams);
}

TEST_CASE("normalize evaluates the defining formulas") {
  const auto np = normalize(PhysicalParams::defaults());
  CHECK(np.c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(np.sigma == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(np.nu == 1.0);
  CHECK(np.eta == 0.0);
  CHECK(np.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(np.b == doctest::Approx(0.816497).epsilon(1e-6));
  CHECK(np.two_nu_eta() == 2.0);
  CHECK(np.c_hat() == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(np.kappa_prime() == doctest::Approx(2.0 / 3.0));

  PhysicalParams p;
  p.tau = 4.0;
  const auto n4 = normalize(p);
  CHECK(n4.a == doctest::Approx(0.5));
  CHECK(n4.b == doctest::Approx(std::sqrt(1.0 / 6.0)));
  CHECK(n4.c == doctest::Approx(1.0));

  p = PhysicalParams::defaults();
  p.gamma = 2.0;
  const auto n2 = normalize(p);
  CHECK(n2.c == doctest::Approx(1.0));
  CHECK(n2.sigma == doctest::Approx(1.0));
  CHECK(n2.b == doctest::Approx(1.0));
  CHECK(n2.a == doctest::Approx(1.0));

  // Re-evaluation at a generic parameter set.
  PhysicalParams g{2.0, 1.4, 0.7, 0.3, 0.9, 0.2, 1.3, 2.5};
  const auto ng = normalize(g);
  CHECK(ng.c == doctest::Approx(std::sqrt(2.0 * 2.5)));
  CHECK(ng.sigma == doctest::Approx(std::sqrt(0.4 * 2.0 * 2.5)));
  CHECK(ng.nu == doctest::Approx(0.9 / 1.3));
  CHECK(ng.eta == doctest::Approx(0.2 / 1.3));
  CHECK(ng.a == doctest::Approx(std::sqrt(0.7 * 1.3 * 2.0 * 2.5 * 2.5 / 0.3)));
  CHECK(ng.b == doctest::Approx(std::sqrt(0.7 * 0.4 / (0.3 * 1.3 * 2.0))));
}

TEST_CASE("perturbation variables") {
  const auto np = normalize(PhysicalParams::defaults());
  PrimitiveFields f;
  f.rho = {1.0, 1.1};
  f.theta = {1.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    f.u[i] = {0.0, 0.0};
    f.q[i] = {0.0, 0.0};
  }
  const auto pf = to_perturbation(f, np);
  CHECK(pf.n[0] == 0.0);
  CHECK(pf.n[1] == doctest::Approx(0.1));
  CHECK(pf.phi[0] == 0.0);

  f.rho[0] = 0.0;
  CHECK_THROWS_AS(to_perturbation(f, np), VacuumBreach);
  f.rho[0] = 1.0;
  f.theta[1] = -0.1;
  CHECK_THROWS_AS(to_perturbation(f, np), NegativeTemperature);
}

TEST_CASE("round trip is the identity") {
  PhysicalParams p{1.7, 1.4, 0.8, 2.0, 0.5, 0.1, 1.2, 0.9};
  const auto np = normalize(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  const std::size_t m = 200;
  PrimitiveFields f;
  f.rho.resize(m);
  f.theta.resize(m);
  for (int i = 0; i < 3; ++i) {
    f.u[i].resize(m);
    f.q[i].resize(m);
  }
  for (std::size_t j = 0; j < m; ++j) {
    f.rho[j] = 1.2 * (1.0 + U(rng));
    f.theta[j] = 0.9 * (1.0 + U(rng));
    for (int i = 0; i < 3; ++i) {
      f.u[i][j] = U(rng);
      f.q[i][j] = U(rng);
    }
  }
  const auto back = from_perturbation(to_perturbation(f, np), np);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  double err = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    err = std::max({err, rel(back.rho[j], f.rho[j]), rel(back.theta[j], f.theta[j])});
    for (int i = 0; i < 3; ++i) err = std::max({err, rel(back.u[i][j], f.u[i][j]), rel(back.q[i][j], f.q[i][j])});
  }
  CHECK(err < 1e-13);

  PerturbationFields bad;
  bad.n = {-1.0};
  bad.phi = {0.0};
  for (int i = 0; i < 3; ++i) {
    bad.w[i] = {0.0};
    bad.psi[i] = {0.0};
  }
  CHECK_THROWS_AS(from_perturbation(bad, np), VacuumBreach);
  bad.n = {0.0};
  bad.phi = {-10.0};
  CHECK_THROWS_AS(from_perturbation(bad, np), NegativeTemperature);
}
