#include <cmath>
#include <random>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "doctest.h"
#include "nsclab/errors.hpp"
#include "nsclab/expm.hpp"
#include "nsclab/green.hpp"

using namespace nsclab;

namespace {
const NormalizedParams kNp = normalize(PhysicalParams::defaults());

double max_abs(const Mat8& m) { return m.cwiseAbs().maxCoeff(); }

// d/dt G = -B G integrated with an adaptive Dormand-Prince scheme.
Mat8 ode_green(const Vec3& xi, double t) {
  const Mat8 B = build_symbol(xi, kNp).entries;
  using State = std::vector<double>;
  State y(128, 0.0);
  for (int i = 0; i < 8; ++i) y[2 * (i * 8 + i)] = 1.0;
  auto rhs = [&](const State& s, State& ds, double) {
    Mat8 G;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) G(i, j) = cplx(s[2 * (i * 8 + j)], s[2 * (i * 8 + j) + 1]);
    const Mat8 D = -B * G;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        ds[2 * (i * 8 + j)] = D(i, j).real();
        ds[2 * (i * 8 + j) + 1] = D(i, j).imag();
      }
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>()), rhs, y,
                          0.0, t, 1e-3);
  Mat8 G;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) G(i, j) = cplx(y[2 * (i * 8 + j)], y[2 * (i * 8 + j) + 1]);
  return G;
}
}  // namespace

TEST_CASE("spectral weights") {
  EigenSet e = eigen_set(0.0, kNp);
  const auto w0 = gk_hk(e, kNp);
  CHECK(std::abs(w0.g[0]) < 1e-15);  // lambda = -1/tau
  CHECK(std::abs(w0.g[3]) == 0.0);
  CHECK(std::abs(w0.h[3]) == 0.0);

  e = eigen_set(1.0, kNp);
  const auto w = gk_hk(e, kNp);
  const cplx l = e.lambda(6);
  CHECK(std::abs(w.g[3] - (l * l + l / kNp.tau + kNp.b * kNp.b)) < 1e-12);
  CHECK(std::abs(w.h[3] - (l * l + 2.0 * l + 1.0)) < 1e-12);
}

TEST_CASE("expm oracle") {
  const Mat8 G0 = green_expm(Vec3::Zero(), 3.0, kNp).entries;
  for (int i = 0; i < 8; ++i) {
    const double want = i >= 5 ? std::exp(-3.0) : 1.0;
    CHECK(std::abs(G0(i, i) - want) < 1e-14);
  }
  CHECK(std::abs(max_abs(G0 - Mat8(G0.diagonal().asDiagonal()))) == 0.0);

  const Vec3 xi(0.4, -0.7, 0.2);
  const Mat8 a = green_expm(xi, 0.7, kNp).entries, b = green_expm(xi, 1.9, kNp).entries;
  const Mat8 ab = green_expm(xi, 2.6, kNp).entries;
  CHECK(max_abs(a * b - ab) < 1e-10);

  const Vec3 e1(1, 0, 0);
  const Mat8 Go = ode_green(e1, 1.0), Ge = green_expm(e1, 1.0, kNp).entries;
  for (int j = 0; j < 8; ++j) CHECK(std::abs(Go.col(j).norm() - Ge.col(j).norm()) < 1e-9);
  CHECK(max_abs(Go - Ge) < 1e-9);
}

TEST_CASE("explicit formulas against expm") {
  const Vec3 xi(0.3, 0, 0);
  const Mat8 E = green_explicit(xi, 2.0, kNp).entries, X = green_expm(xi, 2.0, kNp).entries;
  CHECK(max_abs(E - X) < 1e-8);

  const Mat8 I0 = green_explicit(Vec3(0.2, 0.5, -1.0), 0.0, kNp).entries;
  CHECK(max_abs(I0 - Mat8::Identity()) < 1e-9);

  CHECK(max_abs(green_explicit(Vec3(0.1, 0, 0), 1e4, kNp).entries) < 1e-6);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> L(-3, 3), T(0, 100);
  int tested = 0;
  for (int i = 0; i < 300; ++i) {
    Vec3 v(N(rng), N(rng), N(rng));
    v *= std::pow(10.0, L(rng)) / v.norm();
    const double t = T(rng);
    Mat8 Ex;
    try {
      Ex = green_explicit(v, t, kNp).entries;
    } catch (const EigenvalueCollision&) {
      continue;
    }
    ++tested;
    const Mat8 Xp = green_expm(v, t, kNp).entries;
    const double err = max_abs(Ex - Xp);
    CHECK(err <= 1e-7 + 1e-7 * Xp.norm());
  }
  CHECK(tested > 290);

  Vec8 u;
  for (int i = 0; i < 8; ++i) u(i) = cplx(N(rng), N(rng));
  const Vec3 x2(0.8, 0.1, 0.3);
  const Vec8 ue = apply_green(green_explicit(x2, 3.0, kNp), u);
  const Vec8 ux = apply_green(green_expm(x2, 3.0, kNp), u);
  CHECK((ue - ux).cwiseAbs().maxCoeff() < 1e-8);
  GreenMatrix id{Mat8::Identity(), x2, 0.0, GreenMethod::Expm};
  CHECK((apply_green(id, u) - u).norm() == 0.0);
}

TEST_CASE("realness and transverse decoupling") {
  const Vec3 xi(0.6, -0.2, 1.1);
  const Mat8 P = green_explicit(xi, 1.5, kNp).entries, M = green_explicit(-xi, 1.5, kNp).entries;
  CHECK(max_abs(M - P.conjugate()) < 1e-12);

  const double r = 0.7, t = 2.0;
  const Mat8 G = green_explicit(Vec3(r, 0, 0), t, kNp).entries;
  for (int k : {2, 3}) {
    for (int j = 0; j < 8; ++j) {
      const cplx want = j == k ? std::exp(-kNp.nu * r * r * t) : 0.0;
      CHECK(std::abs(G(k, j) - want) < 1e-12);
      CHECK(std::abs(G(j, k) - want) < 1e-12);
    }
  }
  for (int k : {6, 7}) {
    for (int j = 0; j < 8; ++j) {
      const cplx want = j == k ? std::exp(-t / kNp.tau) : 0.0;
      CHECK(std::abs(G(k, j) - want) < 1e-12);
    }
  }
}

TEST_CASE("low-frequency leading entries") {
  CHECK_THROWS_AS(green_lowfreq_leading(Vec3(0.2, 0, 0), 1.0, kNp), OutOfBand);

  // Entry psi-phi at t = 10: relative error shrinks with |xi|.
  double prev = 0.0;
  for (double r : {0.02, 0.01, 0.005}) {
    const Vec3 xi(r, 0, 0);
    const Mat8 L = green_lowfreq_leading(xi, 10.0, kNp).entries;
    const Mat8 X = green_expm(xi, 10.0, kNp).entries;
    const double err = std::abs(L(4, 5) - X(4, 5)) / std::abs(X(4, 5));
    CHECK(err < 3.0 * r);
    if (prev > 0.0) CHECK(err < 0.7 * prev);
    prev = err;
  }

  // Full matrix: the error envelope over a window of |xi|^2 t halves with |xi|.
  std::vector<double> errs;
  for (double r : {0.04, 0.02, 0.01}) {
    const Vec3 xi(0, r, 0);
    double env = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const double t = (0.5 + 1.5 * k / 40.0) / (r * r);
      const Mat8 L = green_lowfreq_leading(xi, t, kNp).entries;
      const Mat8 X = green_expm(xi, t, kNp).entries;
      env = std::max(env, (L - X).norm() / X.norm());
    }
    errs.push_back(env);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double ratio = errs[i - 1] / errs[i];
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.4);
  }
}

TEST_CASE("longitudinal propagator") {
  for (double r : {0.0, 1e-3, 0.3, 2.0, 40.0}) {
    const LongitudinalPropagator P(r, kNp);
    const Mat4 Mexp = expm((-1.3) * longitudinal_block(r, kNp));
    CHECK((P.at(1.3) - Mexp).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(P.at(0.0) == Mat4::Identity());
  }
  CHECK_FALSE(LongitudinalPropagator(0.0, kNp).spectral());
  CHECK(LongitudinalPropagator(0.5, kNp).spectral());
}
