#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "nsclab/errors.hpp"
#include "nsclab/symbol.hpp"

using namespace nsclab;

namespace {
const NormalizedParams kNp = normalize(PhysicalParams::defaults());

std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// Largest distance after greedily pairing each wanted value with its nearest.
double greedy_distance(std::vector<cplx> got, const std::vector<cplx>& want) {
  double worst = 0.0;
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](cplx a, cplx b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}
}  // namespace

TEST_CASE("symbol block structure") {
  const auto B0 = build_symbol(Vec3::Zero(), kNp).entries;
  Mat8 expect = Mat8::Zero();
  for (int i = 5; i < 8; ++i) expect(i, i) = 1.0;
  CHECK((B0 - expect).norm() == 0.0);

  const auto B = build_symbol(Vec3(1, 0, 0), kNp).entries;
  CHECK(std::abs(B(0, 1) - kI) < 1e-15);
  CHECK(std::abs(B(1, 1) - 2.0) < 1e-15);
  CHECK(std::abs(B(2, 2) - 1.0) < 1e-15);
  CHECK(std::abs(B(3, 3) - 1.0) < 1e-15);
  CHECK(std::abs(B(4, 5) - kI * std::sqrt(2.0 / 3.0)) < 1e-15);
  CHECK(std::abs(B(5, 4) - kI * std::sqrt(2.0 / 3.0)) < 1e-15);
  CHECK(std::abs(B(0, 4)) == 0.0);
}

TEST_CASE("quartic coefficients and roots") {
  const auto q1 = longitudinal_quartic(1.0, kNp);
  CHECK(q1.a4 == doctest::Approx(1.0));
  CHECK(q1.a3 == doctest::Approx(3.0));
  CHECK(q1.a2 == doctest::Approx(13.0 / 3.0));
  CHECK(q1.a1 == doctest::Approx(3.0));
  CHECK(q1.a0 == doctest::Approx(2.0 / 3.0));

  const auto roots1 = solve_quartic(q1);
  cplx sum = 0, prod = 1;
  for (auto z : roots1) {
    sum += z;
    prod *= z;
    CHECK(std::abs(q1(z)) < 1e-10 * q1.max_abs());
  }
  CHECK(std::abs(sum + 3.0) < 1e-12);
  CHECK(std::abs(prod - 2.0 / 3.0) < 1e-12);

  const auto zr = solve_quartic({1, 1, 0, 0, 0});
  const auto z = sorted({zr.begin(), zr.end()});
  CHECK(std::abs(z[0] + 1.0) < 1e-15);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(z[i]) == 0.0);

  CHECK_THROWS_AS(solve_quartic({0, 1, 1, 1, 1}), Degenerate);

  const auto q0 = longitudinal_quartic(0.0, kNp);
  CHECK(q0.a4 == 1.0);
  CHECK(q0.a3 == 1.0);
  CHECK(q0.a0 == 0.0);
}

TEST_CASE("frozen roots at r = 0.1") {
  const auto e = eigen_set(0.1, kNp);
  CHECK(std::abs(e.lambda(3) - cplx(-0.99333408845866849742, 0)) < 1e-13);
  CHECK(std::abs(e.lambda(4) - cplx(-0.011330078034085369, 0.12894197410872110602)) < 1e-13);
  CHECK(std::abs(e.lambda(5) - cplx(-0.011330078034085369, -0.12894197410872110602)) < 1e-13);
  CHECK(std::abs(e.lambda(6) - cplx(-0.0040057554731607661, 0)) < 1e-14);
  CHECK(std::abs(e.lambda(1) - cplx(-0.01, 0)) < 1e-17);
  CHECK(e.lambda(2) == cplx(-1.0, 0));

  const auto e2 = eigen_set(0.01, kNp);
  CHECK(e2.lambda(6).real() == doctest::Approx(-4.00005760e-05).epsilon(1e-8));
}

TEST_CASE("expansions: reference values") {
  const auto lo = low_freq_expansion(0.1, kNp);
  CHECK(lo[0].real() == doctest::Approx(-0.993333).epsilon(1e-6));
  CHECK(lo[3].real() == doctest::Approx(-0.004).epsilon(1e-12));
  CHECK(lo[1].real() == doctest::Approx(-0.011333).epsilon(1e-4));
  CHECK(lo[1].imag() == doctest::Approx(0.129099).epsilon(1e-5));

  const auto lz = low_freq_expansion(0.0, kNp);
  CHECK(lz[0] == cplx(-1.0, 0));
  CHECK(lz[1] == cplx(0, 0));
  CHECK(lz[3] == cplx(0, 0));

  const auto hi = high_freq_expansion(100.0, kNp);
  CHECK(hi[0].real() == doctest::Approx(-0.5));
  CHECK(hi[1].real() == doctest::Approx(-2.0 / 3.0));
  CHECK(hi[1].imag() == doctest::Approx(100.0 * std::sqrt(2.0 / 3.0)));
}

TEST_CASE("expansion convergence orders") {
  const std::vector<double> low{0.02, 0.01, 0.005};
  const auto rl = verify_expansions(kNp, FrequencyBand::Low, low);
  CHECK(rl.pass);
  CHECK(rl.branches[0].orders[0] > 3.7);
  CHECK(rl.branches[1].orders[0] > 2.7);

  const std::vector<double> high{50, 100, 200};
  const auto rh = verify_expansions(kNp, FrequencyBand::High, high);
  CHECK(rh.pass);
  CHECK(rh.branches[0].orders[0] > 1.7);

  PhysicalParams p;
  p.tau = 0.5;
  const auto np5 = normalize(p);
  CHECK(verify_expansions(np5, FrequencyBand::Low, low).pass);
  CHECK(verify_expansions(np5, FrequencyBand::High, high).pass);
}

TEST_CASE("branch tracking and spectral bounds") {
  std::vector<double> grid;
  for (int i = 0; i < 500; ++i) grid.push_back(std::pow(10.0, -4.0 + 8.0 * (i + 0.5) / 500));
  for (double tau : {0.1, 1.0, 10.0}) {
    PhysicalParams p;
    p.tau = tau;
    const auto np = normalize(p);
    const auto br = eigen_branches(grid, np);
    for (const auto& e : br) {
      CHECK(e.lambda2 == -1.0 / tau);
      for (const auto& l : e.longitudinal) CHECK(l.real() <= 0.0);
      if (std::abs(e.longitudinal[1].imag()) > 0) {
        CHECK(e.longitudinal[2] == std::conj(e.longitudinal[1]));
      }
      const auto q = longitudinal_quartic(e.r, np);
      cplx s = 0, pr = 1;
      for (const auto& l : e.longitudinal) {
        s += l;
        pr *= l;
      }
      CHECK(std::abs(s + q.a3 / q.a4) <= 1e-10 * std::abs(q.a3 / q.a4));
      CHECK(std::abs(pr - q.a0 / q.a4) <= 1e-10 * std::abs(q.a0 / q.a4));
    }
    const auto sb = spectral_bounds(br, 0.1, 10.0);
    CHECK(sb.beta > 0);
    CHECK(sb.R1 > 0);
    CHECK(sb.R2 > 0);
    if (tau == 1.0) CHECK(sb.beta <= 0.4 * (1.0 + 1e-6));
  }
  const std::vector<double> single{0.0};
  const auto s0 = eigen_branches(single, kNp);
  CHECK(s0[0].lambda(3) == cplx(-1.0, 0));
  CHECK(std::abs(s0[0].lambda(6)) == 0.0);
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS(eigen_branches(bad, kNp));
}

TEST_CASE("full symbol spectrum matches the quartic reduction") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> L(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 xi(N(rng), N(rng), N(rng));
    xi *= std::pow(10.0, L(rng)) / xi.norm();
    const Mat8 B = build_symbol(xi, kNp).entries;
    Eigen::ComplexEigenSolver<Mat8> es(-B);
    const std::vector<cplx> got(es.eigenvalues().begin(), es.eigenvalues().end());
    const auto e = eigen_set(xi.norm(), kNp);
    std::vector<cplx> want{e.lambda1, e.lambda1, e.lambda2, e.lambda2};
    for (auto l : e.longitudinal) want.push_back(l);
    const double scale = std::max(1.0, xi.squaredNorm());
    CHECK(greedy_distance(got, want) < 1e-9 * scale);

    // Rotation invariance.
    const Mat8 B1 = build_symbol(Vec3(xi.norm(), 0, 0), kNp).entries;
    Eigen::ComplexEigenSolver<Mat8> es1(-B1);
    const std::vector<cplx> got1(es1.eigenvalues().begin(), es1.eigenvalues().end());
    CHECK(greedy_distance(got1, got) < 1e-10 * scale);
  }
}
