#include "nsclab/nonlinsim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nsclab/errors.hpp"
#include "nsclab/expm.hpp"
#include "nsclab/symbol.hpp"

namespace nsclab {

struct PeriodicGrid::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real);
    fftw_free(spec);
  }
};

PeriodicGrid::PeriodicGrid(int N, double L) : N_(N), L_(L) {
  if (N < 8 || !std::has_single_bit(static_cast<unsigned>(N))) {
    throw std::invalid_argument("PeriodicGrid: N must be a power of two >= 8, got " + std::to_string(N));
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("PeriodicGrid: L must be positive");
  mask_.resize(spectral_size());
  for (std::size_t s = 0; s < mask_.size(); ++s) {
    const auto m = modes(s);
    bool keep = true;
    for (int v : m) keep = keep && 3 * std::abs(v) <= N_;
    mask_[s] = keep ? 1 : 0;
  }
  plans_ = std::make_unique<Plans>();
  plans_->real = fftw_alloc_real(real_size());
  plans_->spec = fftw_alloc_complex(spectral_size());
  plans_->r2c = fftw_plan_dft_r2c_3d(N_, N_, N_, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_3d(N_, N_, N_, plans_->spec, plans_->real, FFTW_ESTIMATE);
}

PeriodicGrid::~PeriodicGrid() = default;

double PeriodicGrid::dx() const { return 2.0 * std::numbers::pi * L_ / N_; }
double PeriodicGrid::volume() const { return std::pow(2.0 * std::numbers::pi * L_, 3); }

std::array<int, 3> PeriodicGrid::modes(std::size_t s) const {
  const std::size_t l = s % nz();
  const std::size_t ij = s / nz();
  return {mode(static_cast<int>(ij / N_)), mode(static_cast<int>(ij % N_)), static_cast<int>(l)};
}

Vec3 PeriodicGrid::wavevector(std::size_t s) const {
  const auto m = modes(s);
  return Vec3(m[0], m[1], m[2]) / L_;
}

double PeriodicGrid::weight(std::size_t s) const {
  const auto l = static_cast<int>(s % nz());
  return (l == 0 || 2 * l == N_) ? 1.0 : 2.0;
}

void PeriodicGrid::forward(const std::vector<double>& u, std::vector<cplx>& out) const {
  std::copy(u.begin(), u.end(), plans_->real);
  fftw_execute(plans_->r2c);
  out.resize(spectral_size());
  const double scale = 1.0 / static_cast<double>(real_size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s] = cplx(plans_->spec[s][0], plans_->spec[s][1]) * scale;
  }
}

void PeriodicGrid::backward(const std::vector<cplx>& coeffs, std::vector<double>& out) const {
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    plans_->spec[s][0] = coeffs[s].real();
    plans_->spec[s][1] = coeffs[s].imag();
  }
  fftw_execute(plans_->c2r);
  out.assign(plans_->real, plans_->real + real_size());
}

void PeriodicGrid::apply_mask(std::vector<cplx>& coeffs) const {
  for (std::size_t s = 0; s < coeffs.size(); ++s)
    if (!mask_[s]) coeffs[s] = 0.0;
}

namespace {

double temperature_scale(const NormalizedParams& np) { return std::sqrt(np.physical.gamma - 1.0); }

void check_positivity(const std::vector<double>& n, const std::vector<double>& phi,
                      const NormalizedParams& np, double floor) {
  const double g = temperature_scale(np);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(1.0 + n[i] > floor)) {
      throw VacuumBreach("1+n = " + std::to_string(1.0 + n[i]) + " at grid index " + std::to_string(i));
    }
    if (!(1.0 + g * phi[i] > floor)) {
      throw NegativeTemperature("temperature factor " + std::to_string(1.0 + g * phi[i]) +
                                " at grid index " + std::to_string(i));
    }
  }
}

// Spectral derivative d/dx_j.
std::vector<cplx> derivative(const PeriodicGrid& grid, const std::vector<cplx>& u, int j) {
  std::vector<cplx> out(u.size());
  for (std::size_t s = 0; s < u.size(); ++s) out[s] = kI * grid.wavevector(s)(j) * u[s];
  return out;
}

std::vector<double> physical(const PeriodicGrid& grid, const std::vector<cplx>& u) {
  std::vector<double> out;
  grid.backward(u, out);
  return out;
}

}  // namespace

StateField init_state(const PeriodicGrid& grid, const DataGenerator& gen, double amplitude,
                      const NormalizedParams& np) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("init_state: amplitude must be finite and nonnegative");
  }
  const int N = grid.N();
  const double h = grid.dx();
  PhysicalFields phys;
  for (auto& f : phys) f.assign(grid.real_size(), 0.0);

  auto add_mode = [&](std::vector<double>& f, const std::array<int, 3>& m, double A, double B) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
          const double arg = (m[0] * i + m[1] * j + m[2] * l) * h / grid.L();
          f[(static_cast<std::size_t>(i) * N + j) * N + l] += A * std::cos(arg) + B * std::sin(arg);
        }
  };

  if (gen.kind == DataKind::SingleMode) {
    if (gen.field < 0 || gen.field >= kFields) throw std::invalid_argument("init_state: field out of range");
    if (3 * std::abs(gen.m1) > N) throw std::invalid_argument("init_state: mode is not retained on this grid");
    add_mode(phys[gen.field], {gen.m1, 0, 0}, amplitude, 0.0);
  } else {
    if (gen.kmax < 1 || 3 * gen.kmax > N) {
      throw std::invalid_argument("init_state: kmax must be in [1, N/3]");
    }
    // Half-space of modes: first nonzero component positive.
    std::vector<std::array<int, 3>> half;
    for (int a = -gen.kmax; a <= gen.kmax; ++a)
      for (int b = -gen.kmax; b <= gen.kmax; ++b)
        for (int c = -gen.kmax; c <= gen.kmax; ++c) {
          const bool pos = a > 0 || (a == 0 && (b > 0 || (b == 0 && c > 0)));
          if (pos) half.push_back({a, b, c});
        }
    std::mt19937_64 rng(gen.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int f = 0; f < kFields; ++f) {
      std::vector<std::array<double, 2>> amps(half.size());
      double total = 0.0;
      for (auto& a : amps) {
        a = {uni(rng), uni(rng)};
        total += std::abs(a[0]) + std::abs(a[1]);
      }
      for (std::size_t k = 0; k < half.size(); ++k) {
        add_mode(phys[f], half[k], amplitude * amps[k][0] / total, amplitude * amps[k][1] / total);
      }
    }
  }

  try {
    check_positivity(phys[0], phys[4], np, 0.5);
  } catch (const Error& e) {
    throw AmplitudeTooLarge(std::string("init_state: positivity margin violated: ") + e.what());
  }

  StateField s;
  for (int f = 0; f < kFields; ++f) {
    grid.forward(phys[f], s.coeffs[f]);
    grid.apply_mask(s.coeffs[f]);
  }
  return s;
}

PhysicalFields to_physical(const PeriodicGrid& grid, const StateField& s) {
  PhysicalFields out;
  for (int f = 0; f < kFields; ++f) grid.backward(s.coeffs[f], out[f]);
  return out;
}

SpectralFields rhs_nonlinear(const PeriodicGrid& grid, const StateField& s, const NormalizedParams& np) {
  const auto& U = s.coeffs;
  const std::size_t M = grid.real_size();
  const double c = np.c, sigma = np.sigma, nu = np.nu, eta = np.eta, b = np.b;
  const double gm1 = np.physical.gamma - 1.0;

  const auto n = physical(grid, U[0]);
  const auto phi = physical(grid, U[4]);
  std::array<std::vector<double>, 3> w, dn, dphi, lapw, gdivw;
  std::array<std::array<std::vector<double>, 3>, 3> dw;  // dw[i][j] = d_j w_i

  std::vector<cplx> divw_hat(U[1].size(), 0.0), divpsi_hat(U[1].size(), 0.0);
  for (int i = 0; i < 3; ++i) {
    w[i] = physical(grid, U[1 + i]);
    dn[i] = physical(grid, derivative(grid, U[0], i));
    dphi[i] = physical(grid, derivative(grid, U[4], i));
    for (int j = 0; j < 3; ++j) dw[i][j] = physical(grid, derivative(grid, U[1 + i], j));
    const auto di = derivative(grid, U[1 + i], i);
    const auto dpsi = derivative(grid, U[5 + i], i);
    for (std::size_t k = 0; k < di.size(); ++k) {
      divw_hat[k] += di[k];
      divpsi_hat[k] += dpsi[k];
    }
  }
  std::vector<cplx> lap_hat(U[1].size());
  for (int i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < lap_hat.size(); ++k) lap_hat[k] = -grid.wavevector(k).squaredNorm() * U[1 + i][k];
    lapw[i] = physical(grid, lap_hat);
    gdivw[i] = physical(grid, derivative(grid, divw_hat, i));
  }
  const auto divpsi = physical(grid, divpsi_hat);

  std::vector<double> inv(M);
  for (std::size_t x = 0; x < M; ++x) {
    if (!(1.0 + n[x] > 0.0)) {
      throw VacuumBreach("rhs_nonlinear: 1+n = " + std::to_string(1.0 + n[x]) + " at grid index " +
                         std::to_string(x));
    }
    inv[x] = 1.0 / (1.0 + n[x]);
  }

  SpectralFields out;
  for (auto& f : out) f.assign(U[0].size(), 0.0);

  // f1 = -c div(n w)
  std::vector<double> tmp(M);
  std::vector<cplx> hat;
  for (int j = 0; j < 3; ++j) {
    for (std::size_t x = 0; x < M; ++x) tmp[x] = n[x] * w[j][x];
    grid.forward(tmp, hat);
    grid.apply_mask(hat);
    for (std::size_t k = 0; k < hat.size(); ++k) out[0][k] -= c * kI * grid.wavevector(k)(j) * hat[k];
  }

  // f2
  for (int i = 0; i < 3; ++i) {
    for (std::size_t x = 0; x < M; ++x) {
      double adv = 0.0;
      for (int j = 0; j < 3; ++j) adv += w[j][x] * dw[i][j][x];
      tmp[x] = -c * adv + c * n[x] * dn[i][x] * inv[x] - sigma * phi[x] * dn[i][x] * inv[x] -
               nu * n[x] * lapw[i][x] * inv[x] - (nu + eta) * n[x] * gdivw[i][x] * inv[x];
    }
    grid.forward(tmp, out[1 + i]);
    grid.apply_mask(out[1 + i]);
  }

  // f3
  for (std::size_t x = 0; x < M; ++x) {
    double adv = 0.0, divw = 0.0, dd = 0.0;
    for (int j = 0; j < 3; ++j) {
      adv += w[j][x] * dphi[j][x];
      divw += dw[j][j][x];
      for (int i = 0; i < 3; ++i) {
        const double D = 0.5 * (dw[i][j][x] + dw[j][i][x]);
        dd += D * D;
      }
    }
    tmp[x] = -c * adv - c * gm1 * phi[x] * divw + sigma * (2.0 * nu * dd + eta * divw * divw) / c * inv[x] +
             b * n[x] * divpsi[x] * inv[x];
  }
  grid.forward(tmp, out[4]);
  grid.apply_mask(out[4]);
  return out;
}

StateField propagate_linear(const PeriodicGrid& grid, const StateField& s, double t,
                            const NormalizedParams& np) {
  StateField out = s;
  out.time = s.time + t;
  if (t == 0.0) return out;
  for (std::size_t k = 0; k < grid.spectral_size(); ++k) {
    if (!grid.retained(k)) continue;
    Vec8 u;
    for (int f = 0; f < kFields; ++f) u(f) = s.coeffs[f][k];
    if (u.isZero(0.0)) continue;
    const Mat8 G = expm((-t) * build_symbol(grid.wavevector(k), np).entries);
    const Vec8 v = G * u;
    for (int f = 0; f < kFields; ++f) out.coeffs[f][k] = v(f);
  }
  return out;
}

double cfl_limit(const PeriodicGrid& grid, const StateField& s, const NormalizedParams& np) {
  double umax = 0.0;
  std::vector<double> w;
  for (int i = 0; i < 3; ++i) {
    grid.backward(s.coeffs[1 + i], w);
    for (double v : w) umax = std::max(umax, std::abs(np.c * v));
  }
  return umax > 0.0 ? 0.5 * grid.dx() / umax : std::numeric_limits<double>::infinity();
}

Stepper::Stepper(const PeriodicGrid& grid, const NormalizedParams& np) : grid_(grid), np_(np) {
  for (std::size_t k = 0; k < grid.spectral_size(); ++k)
    if (grid.retained(k)) slots_.push_back(k);
}

void Stepper::prepare(double dt) {
  if (dt == cached_dt_) return;
  half_.resize(slots_.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    half_[i] = expm((-0.5 * dt) * build_symbol(grid_.wavevector(slots_[i]), np_).entries);
  }
  cached_dt_ = dt;
}

StateField Stepper::step(const StateField& s, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step: dt must be positive");
  const double limit = cfl_limit(grid_, s, np_);
  if (dt > limit) {
    throw CFLViolation("step: dt = " + std::to_string(dt) + " exceeds advective bound " + std::to_string(limit));
  }
  prepare(dt);

  auto linear_half = [&](StateField& u) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      const std::size_t k = slots_[i];
      Vec8 v;
      for (int f = 0; f < kFields; ++f) v(f) = u.coeffs[f][k];
      const Vec8 r = half_[i] * v;
      for (int f = 0; f < kFields; ++f) u.coeffs[f][k] = r(f);
    }
  };

  StateField u = s;
  linear_half(u);
  const auto k1 = rhs_nonlinear(grid_, u, np_);
  StateField mid = u;
  for (int f = 0; f < kFields; ++f)
    for (std::size_t k = 0; k < k1[f].size(); ++k) mid.coeffs[f][k] += 0.5 * dt * k1[f][k];
  const auto k2 = rhs_nonlinear(grid_, mid, np_);
  for (int f = 0; f < kFields; ++f)
    for (std::size_t k = 0; k < k2[f].size(); ++k) u.coeffs[f][k] += dt * k2[f][k];
  linear_half(u);
  u.time = s.time + dt;

  std::vector<double> n, phi;
  grid_.backward(u.coeffs[0], n);
  grid_.backward(u.coeffs[4], phi);
  check_positivity(n, phi, np_, 0.25);
  return u;
}

MonitorRow monitors(const PeriodicGrid& grid, const StateField& s, const NormalizedParams& np) {
  const auto phys = to_physical(grid, s);
  PerturbationFields pf;
  pf.n = phys[0];
  pf.phi = phys[4];
  for (int i = 0; i < 3; ++i) {
    pf.w[i] = phys[1 + i];
    pf.psi[i] = phys[5 + i];
  }
  const PrimitiveFields pr = from_perturbation(pf, np);
  const auto& p = np.physical;
  const double dV = grid.cell_volume();

  MonitorRow row;
  row.time = s.time;
  row.min_density = std::numeric_limits<double>::infinity();
  double mass = 0.0, energy = 0.0, entropy = 0.0;
  for (std::size_t x = 0; x < pr.rho.size(); ++x) {
    const double rho = pr.rho[x], th = pr.theta[x];
    double u2 = 0.0, q2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      u2 += pr.u[i][x] * pr.u[i][x];
      q2 += pr.q[i][x] * pr.q[i][x];
    }
    const double dr = rho / p.rho_star - 1.0;
    const double dth = th / p.theta_star - 1.0;
    mass += phys[0][x];
    energy += 0.5 * rho * u2 + p.R / (p.gamma - 1.0) * rho * (th - p.theta_star);
    entropy += p.R * p.theta_star * p.rho_star * ((1.0 + dr) * std::log1p(dr) - dr) + 0.5 * rho * u2 +
               p.R / (p.gamma - 1.0) * rho * p.theta_star * (dth - std::log1p(dth)) +
               p.tau * p.theta_star / (2.0 * p.kappa * th * th) * q2;
    row.min_density = std::min(row.min_density, 1.0 + phys[0][x]);
  }
  row.mass = mass * dV;
  row.energy = energy * dV;
  row.entropy = entropy * dV;

  double h3f = 0.0, h3p = 0.0;
  for (std::size_t k = 0; k < grid.spectral_size(); ++k) {
    const double wgt = grid.weight(k) * std::pow(1.0 + grid.wavevector(k).squaredNorm(), 3);
    for (int f = 0; f < 5; ++f) h3f += wgt * std::norm(s.coeffs[f][k]);
    for (int f = 5; f < kFields; ++f) h3p += wgt * std::norm(s.coeffs[f][k]);
  }
  row.h3_fluid = std::sqrt(grid.volume() * h3f);
  row.h3_psi = std::sqrt(grid.volume() * h3p);
  return row;
}

double state_distance(const PeriodicGrid& grid, const StateField& a, const StateField& b) {
  double sum = 0.0;
  for (int f = 0; f < kFields; ++f)
    for (std::size_t k = 0; k < grid.spectral_size(); ++k)
      sum += grid.weight(k) * std::norm(a.coeffs[f][k] - b.coeffs[f][k]);
  return std::sqrt(grid.volume() * sum);
}

RunResult run(const NonlinearConfig& cfg, const NormalizedParams& np) {
  if (!(cfg.tmax >= 0.0)) throw std::invalid_argument("run: tmax must be nonnegative");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  if (cfg.monitor_every < 1) throw std::invalid_argument("run: monitor_every must be >= 1");
  if (cfg.cfl < 0.0 || cfg.cfl > 0.5) throw std::invalid_argument("run: cfl must be in [0, 0.5]");
  const PeriodicGrid grid(cfg.N, cfg.L);
  RunResult res;
  res.initial = init_state(grid, cfg.data, cfg.amplitude, np);
  StateField s = res.initial;
  Stepper stepper(grid, np);

  // Fixed mode: uniform steps landing exactly on tmax.
  const auto fixed_steps = static_cast<std::size_t>(std::ceil(cfg.tmax / cfg.dt - 1e-12));
  const double fixed_dt = fixed_steps > 0 ? cfg.tmax / static_cast<double>(fixed_steps) : cfg.dt;

  auto& rep = res.report;
  rep.rows.push_back(monitors(grid, s, np));
  rep.dt_min = std::numeric_limits<double>::infinity();
  double dt_sum = 0.0;
  std::size_t step = 0;
  try {
    while (cfg.cfl > 0.0 ? s.time < cfg.tmax * (1.0 - 1e-14) : step < fixed_steps) {
      double dt = fixed_dt;
      if (cfg.cfl > 0.0) {
        const double lim = cfg.cfl * cfl_limit(grid, s, np) / 0.5;
        dt = std::min({cfg.dt, lim, cfg.tmax - s.time});
      }
      s = stepper.step(s, dt);
      ++step;
      rep.dt_min = std::min(rep.dt_min, dt);
      rep.dt_max = std::max(rep.dt_max, dt);
      dt_sum += dt;
      const bool last = cfg.cfl > 0.0 ? s.time >= cfg.tmax * (1.0 - 1e-14) : step == fixed_steps;
      if (step % static_cast<std::size_t>(cfg.monitor_every) == 0 || last) {
        MonitorRow row = monitors(grid, s, np);
        row.dt = dt;
        rep.rows.push_back(row);
      }
      if (cfg.snapshot_every > 0 && !cfg.snapshot_prefix.empty() &&
          step % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
        write_snapshot(cfg.snapshot_prefix + "_" + std::to_string(step) + ".bin", grid, s);
      }
    }
    res.completed = true;
  } catch (const Error& e) {
    res.error = e.what();
  }
  rep.steps = step;
  if (step == 0) rep.dt_min = 0.0;
  rep.dt_mean = step > 0 ? dt_sum / static_cast<double>(step) : 0.0;
  res.final_state = s;
  return res;
}

namespace {

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw std::runtime_error("read_snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const PeriodicGrid& grid, const StateField& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
  put<std::int64_t>(os, grid.N());
  put<double>(os, grid.L());
  put<double>(os, s.time);
  for (const auto& f : s.coeffs)
    for (const cplx& z : f) {
      put<double>(os, z.real());
      put<double>(os, z.imag());
    }
}

StateField read_snapshot(const std::string& path, int& N, double& L) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
  N = static_cast<int>(get<std::int64_t>(is));
  L = get<double>(is);
  StateField s;
  s.time = get<double>(is);
  const std::size_t size = static_cast<std::size_t>(N) * N * (N / 2 + 1);
  for (auto& f : s.coeffs) {
    f.resize(size);
    for (auto& z : f) {
      const double re = get<double>(is);
      z = cplx(re, get<double>(is));
    }
  }
  return s;
}

std::string monitor_csv(const MonitorReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "time,mass,energy,entropy,h3_fluid,h3_psi,min_density,dt\n";
  for (const auto& m : r.rows) {
    os << m.time << ',' << m.mass << ',' << m.energy << ',' << m.entropy << ',' << m.h3_fluid << ','
       << m.h3_psi << ',' << m.min_density << ',' << m.dt << '\n';
  }
  return os.str();
}

}  // namespace nsclab
