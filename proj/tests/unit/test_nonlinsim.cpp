#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "doctest.h"
#include "nsclab/errors.hpp"
#include "nsclab/nonlinsim.hpp"

using namespace nsclab;

namespace {
const NormalizedParams kNp = normalize(PhysicalParams::defaults());

using Profile = std::function<double(double, double, double)>;

// State from physical profiles; unset fields are zero.
StateField from_profiles(const PeriodicGrid& g, const std::array<Profile, kFields>& prof) {
  StateField s;
  const int N = g.N();
  for (int f = 0; f < kFields; ++f) {
    std::vector<double> u(g.real_size(), 0.0);
    if (prof[f]) {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int l = 0; l < N; ++l)
            u[(static_cast<std::size_t>(i) * N + j) * N + l] = prof[f](i * g.dx(), j * g.dx(), l * g.dx());
    }
    g.forward(u, s.coeffs[f]);
  }
  return s;
}

std::size_t slot(const PeriodicGrid& g, int a, int b, int c) {
  const int N = g.N();
  return (static_cast<std::size_t>((a + N) % N) * N + (b + N) % N) * g.nz() + c;
}

double max_coeff(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}
}  // namespace

TEST_CASE("periodic grid") {
  CHECK_THROWS_AS(PeriodicGrid(12), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicGrid(4), std::invalid_argument);
  const PeriodicGrid g(16, 2.0);
  CHECK(g.dx() == doctest::Approx(2.0 * M_PI * 2.0 / 16));
  std::size_t kept = 0;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    const auto m = g.modes(s);
    const bool inside = std::abs(m[0]) <= 5 && std::abs(m[1]) <= 5 && m[2] <= 5;
    CHECK(g.retained(s) == inside);
    kept += g.retained(s);
  }
  CHECK(kept == 11u * 11u * 6u);
  CHECK(g.wavevector(slot(g, 3, -2, 1)).isApprox(Vec3(1.5, -1.0, 0.5)));
}

TEST_CASE("initial data") {
  const PeriodicGrid g(16);
  SUBCASE("single mode has two conjugate coefficients") {
    DataGenerator gen{DataKind::SingleMode, 0, 0, 0, 1};
    const auto s = init_state(g, gen, 1e-3, kNp);
    int nonzero = 0;
    for (std::size_t k = 0; k < g.spectral_size(); ++k)
      if (std::abs(s.coeffs[0][k]) > 1e-18) ++nonzero;
    CHECK(nonzero == 2);
    CHECK(std::abs(s.coeffs[0][slot(g, 1, 0, 0)] - cplx(5e-4, 0)) < 1e-18);
    CHECK(std::abs(s.coeffs[0][slot(g, -1, 0, 0)] - cplx(5e-4, 0)) < 1e-18);
    for (int f = 1; f < kFields; ++f) CHECK(max_coeff(s.coeffs[f]) == 0.0);
  }
  SUBCASE("fixed seed is bit-identical") {
    const auto a = init_state(g, DataGenerator{}, 1e-3, kNp);
    const auto b = init_state(g, DataGenerator{}, 1e-3, kNp);
    for (int f = 0; f < kFields; ++f) CHECK(a.coeffs[f] == b.coeffs[f]);
    DataGenerator other;
    other.seed = 7;
    CHECK(init_state(g, other, 1e-3, kNp).coeffs[0] != a.coeffs[0]);
  }
  SUBCASE("random data is band-limited and bounded") {
    const auto s = init_state(g, DataGenerator{}, 0.1, kNp);
    const auto p = to_physical(g, s);
    for (int f = 0; f < kFields; ++f) {
      double mx = 0.0;
      for (double v : p[f]) mx = std::max(mx, std::abs(v));
      CHECK(mx <= 0.1 + 1e-14);
      CHECK(mx > 0.0);
    }
    for (std::size_t k = 0; k < g.spectral_size(); ++k) {
      const auto m = g.modes(k);
      if (std::max({std::abs(m[0]), std::abs(m[1]), m[2]}) > 2) CHECK(std::abs(s.coeffs[0][k]) < 1e-17);
    }
    CHECK(std::abs(s.coeffs[0][0]) < 1e-17);
  }
  SUBCASE("positivity margin") {
    DataGenerator gen{DataKind::SingleMode, 0, 0, 0, 1};
    CHECK_THROWS_AS(init_state(g, gen, 0.6, kNp), AmplitudeTooLarge);
    gen.field = 4;
    CHECK_THROWS_AS(init_state(g, gen, 0.9, kNp), AmplitudeTooLarge);
    CHECK_NOTHROW(init_state(g, gen, 0.4, kNp));
  }
}

TEST_CASE("nonlinear tendencies") {
  const PeriodicGrid g(16);
  const double c = kNp.c, sigma = kNp.sigma;

  SUBCASE("zero state") {
    const auto f = rhs_nonlinear(g, init_state(g, DataGenerator{}, 0.0, kNp), kNp);
    for (const auto& v : f) CHECK(max_coeff(v) == 0.0);
  }

  SUBCASE("f1 against the hand-expanded convolution") {
    // n = e cos x1, w2 = d cos x2: f1 = -c d_2(n w2) = c e d cos x1 sin x2.
    const double e = 0.01, d = 0.02;
    std::array<Profile, kFields> prof{};
    prof[0] = [&](double x, double, double) { return e * std::cos(x); };
    prof[2] = [&](double, double y, double) { return d * std::cos(y); };
    const auto f = rhs_nonlinear(g, from_profiles(g, prof), kNp);
    const cplx amp = c * e * d / (4.0 * kI);
    std::vector<cplx> expect(g.spectral_size(), 0.0);
    expect[slot(g, 1, 1, 0)] = amp;
    expect[slot(g, -1, -1, 0)] = std::conj(amp);
    expect[slot(g, 1, -1, 0)] = -amp;
    expect[slot(g, -1, 1, 0)] = -std::conj(amp);
    double err = 0.0;
    for (std::size_t k = 0; k < expect.size(); ++k) err = std::max(err, std::abs(f[0][k] - expect[k]));
    CHECK(err < 1e-12);
  }

  SUBCASE("term dropout with w = psi = 0") {
    std::array<Profile, kFields> prof{};
    prof[0] = [](double x, double y, double) { return 0.05 * std::cos(x) + 0.02 * std::sin(y); };
    prof[4] = [](double, double y, double z) { return 0.03 * std::cos(y + z); };
    const auto s = from_profiles(g, prof);
    const auto f = rhs_nonlinear(g, s, kNp);
    CHECK(max_coeff(f[0]) < 1e-18);
    CHECK(max_coeff(f[4]) < 1e-18);
    // f2_1 = (c n - sigma phi) d_1 n / (1+n), evaluated pointwise then dealiased.
    const int N = g.N();
    std::vector<double> ref(g.real_size());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
          const double x = i * g.dx(), y = j * g.dx(), z = l * g.dx();
          const double n = prof[0](x, y, z), phi = prof[4](x, y, z);
          ref[(static_cast<std::size_t>(i) * N + j) * N + l] = (c * n - sigma * phi) * (-0.05 * std::sin(x)) / (1 + n);
        }
    std::vector<cplx> ref_hat;
    g.forward(ref, ref_hat);
    g.apply_mask(ref_hat);
    double err = 0.0;
    for (std::size_t k = 0; k < ref_hat.size(); ++k) err = std::max(err, std::abs(f[1][k] - ref_hat[k]));
    CHECK(err < 1e-15);
    for (int f2 = 5; f2 < kFields; ++f2) CHECK(max_coeff(f[f2]) == 0.0);
  }

  SUBCASE("vacuum") {
    std::array<Profile, kFields> prof{};
    prof[0] = [](double x, double, double) { return 1.5 * std::cos(x); };
    CHECK_THROWS_AS(rhs_nonlinear(g, from_profiles(g, prof), kNp), VacuumBreach);
  }
}

TEST_CASE("time stepping") {
  const PeriodicGrid g(16);

  SUBCASE("vanishing amplitude reduces to the linear flow") {
    const auto s = init_state(g, DataGenerator{}, 1e-10, kNp);
    Stepper st(g, kNp);
    const auto a = st.step(s, 0.7);
    const auto b = propagate_linear(g, s, 0.7, kNp);
    CHECK(a.time == doctest::Approx(0.7));
    const double ref = state_distance(g, b, init_state(g, DataGenerator{}, 0.0, kNp));
    CHECK(state_distance(g, a, b) < 1e-8 * ref);
  }

  SUBCASE("mean heat flux relaxes exactly") {
    std::array<Profile, kFields> prof{};
    prof[5] = [](double, double, double) { return 0.1; };
    prof[7] = [](double, double, double) { return -0.2; };
    StateField s = from_profiles(g, prof);
    Stepper st(g, kNp);
    for (int i = 0; i < 10; ++i) s = st.step(s, 0.3);
    CHECK(std::abs(s.coeffs[5][0].real() - 0.1 * std::exp(-3.0 / kNp.tau)) < 1e-15);
    CHECK(std::abs(s.coeffs[7][0].real() + 0.2 * std::exp(-3.0 / kNp.tau)) < 1e-15);
    CHECK(max_coeff(s.coeffs[0]) == 0.0);
  }

  SUBCASE("second-order self-convergence") {
    const auto s0 = init_state(g, DataGenerator{}, 0.05, kNp);
    auto solve = [&](int steps) {
      Stepper st(g, kNp);
      StateField s = s0;
      for (int i = 0; i < steps; ++i) s = st.step(s, 1.0 / steps);
      return s;
    };
    const auto ref = solve(640);
    const double e1 = state_distance(g, solve(20), ref);
    const double e2 = state_distance(g, solve(40), ref);
    const double e3 = state_distance(g, solve(80), ref);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }

  SUBCASE("CFL and positivity guards") {
    DataGenerator gen{DataKind::SingleMode, 0, 0, 1, 1};
    const auto s = init_state(g, gen, 0.4, kNp);
    const double lim = cfl_limit(g, s, kNp);
    CHECK(lim == doctest::Approx(0.5 * g.dx() / (kNp.c * 0.4)));
    Stepper st(g, kNp);
    CHECK_THROWS_AS(st.step(s, 1.01 * lim), CFLViolation);
    CHECK_NOTHROW(st.step(s, 0.5 * lim));
    CHECK(std::isinf(cfl_limit(g, init_state(g, DataGenerator{}, 0.0, kNp), kNp)));
  }
}

TEST_CASE("monitors") {
  const PeriodicGrid g(16);
  SUBCASE("equilibrium") {
    const auto m = monitors(g, init_state(g, DataGenerator{}, 0.0, kNp), kNp);
    CHECK(m.mass == 0.0);
    CHECK(m.energy == 0.0);
    CHECK(m.entropy == 0.0);
    CHECK(m.min_density == 1.0);
  }
  SUBCASE("entropy is equivalent to the squared L2 distance") {
    for (double amp : {1e-3, 0.05, 0.1}) {
      const auto s = init_state(g, DataGenerator{}, amp, kNp);
      const auto m = monitors(g, s, kNp);
      const auto p = to_physical(g, s);
      const auto& ph = kNp.physical;
      double l2 = 0.0;
      for (std::size_t x = 0; x < g.real_size(); ++x) {
        const double drho = ph.rho_star * p[0][x];
        const double dth = std::sqrt(ph.gamma - 1.0) * ph.theta_star * p[4][x];
        l2 += drho * drho + dth * dth;
        for (int i = 0; i < 3; ++i) {
          l2 += std::pow(kNp.c * p[1 + i][x], 2) + std::pow(kNp.a * p[5 + i][x], 2);
        }
      }
      l2 *= g.cell_volume();
      CHECK(m.entropy > l2 / 8.0);
      CHECK(m.entropy < 8.0 * l2);
    }
  }
  SUBCASE("H3 norm of a single mode") {
    DataGenerator gen{DataKind::SingleMode, 0, 0, 6, 2};
    const auto m = monitors(g, init_state(g, gen, 0.01, kNp), kNp);
    // |psi2|^2 integrates to amp^2/2 times the volume; weight (1+4)^3.
    CHECK(m.h3_psi == doctest::Approx(std::sqrt(125.0 * 0.5e-4 * g.volume())).epsilon(1e-12));
    CHECK(m.h3_fluid == 0.0);
  }
}

TEST_CASE("runs") {
  SUBCASE("small-amplitude invariants") {
    NonlinearConfig cfg;
    cfg.tmax = 5.0;
    cfg.dt = 0.1;
    const auto res = run(cfg, kNp);
    REQUIRE(res.completed);
    const auto& rows = res.report.rows;
    CHECK(rows.size() == 51);
    CHECK(res.report.steps == 50);
    const double n0 = state_distance(PeriodicGrid(16), res.initial, init_state(PeriodicGrid(16), {}, 0.0, kNp));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::abs(rows[i].mass - rows[0].mass) < 1e-10 * n0);
      CHECK(rows[i].entropy <= rows[i - 1].entropy + 1e-9);
      CHECK(rows[i].h3_fluid < rows[i - 1].h3_fluid);
      CHECK(rows[i].h3_psi < rows[0].h3_psi);
    }
    CHECK(rows.back().time == doctest::Approx(5.0));
  }

  SUBCASE("resolution study") {
    NonlinearConfig a;
    a.tmax = 1.0;
    a.dt = 0.05;
    a.monitor_every = 20;
    NonlinearConfig b = a;
    b.N = 32;
    const auto ra = run(a, kNp), rb = run(b, kNp);
    REQUIRE(ra.completed);
    REQUIRE(rb.completed);
    for (std::size_t i = 0; i < ra.report.rows.size(); ++i) {
      const auto& x = ra.report.rows[i];
      const auto& y = rb.report.rows[i];
      CHECK(std::abs(x.h3_fluid - y.h3_fluid) < 1e-8 * y.h3_fluid);
      CHECK(std::abs(x.h3_psi - y.h3_psi) < 1e-8 * y.h3_psi);
    }
  }

  SUBCASE("adaptive steps and partial reports") {
    NonlinearConfig cfg;
    cfg.tmax = 1.0;
    cfg.dt = 0.3;
    cfg.cfl = 0.4;
    const auto res = run(cfg, kNp);
    CHECK(res.completed);
    CHECK(res.report.steps == 4);
    CHECK(res.report.dt_min == doctest::Approx(0.1));
    CHECK(res.report.rows.back().time == doctest::Approx(1.0));

    NonlinearConfig bad;
    bad.data = DataGenerator{DataKind::SingleMode, 0, 0, 1, 1};
    bad.amplitude = 0.45;
    bad.dt = 2.0;
    const auto r2 = run(bad, kNp);
    CHECK_FALSE(r2.completed);
    CHECK(r2.report.rows.size() == 1);
    CHECK(r2.error.find("advective") != std::string::npos);
  }

  SUBCASE("snapshot round trip") {
    const PeriodicGrid g(8, 1.5);
    auto s = init_state(g, DataGenerator{DataKind::Random, 3, 2}, 1e-2, kNp);
    s.time = 2.25;
    const auto path = (std::filesystem::temp_directory_path() / "nsclab_snapshot_test.bin").string();
    write_snapshot(path, g, s);
    CHECK(std::filesystem::file_size(path) == 8 + 8 + 8 + 8 * 8 * 8 * 5 * 16);
    int N = 0;
    double L = 0;
    const auto r = read_snapshot(path, N, L);
    CHECK(N == 8);
    CHECK(L == 1.5);
    CHECK(r.time == 2.25);
    for (int f = 0; f < kFields; ++f) CHECK(r.coeffs[f] == s.coeffs[f]);
    std::filesystem::remove(path);
  }
}
