#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nsclab/params.hpp"
#include "nsclab/types.hpp"

namespace nsclab {

/// Periodic grid on [0, 2 pi L)^3 with N points per axis. Spectral arrays use the
/// real-to-complex layout N x N x (N/2+1), index (i*N + j)*(N/2+1) + l, and hold
/// Fourier coefficients: u(x) = sum_k u_k exp(i k.x), k = m/L.
class PeriodicGrid {
 public:
  PeriodicGrid(int N, double L = 1.0);
  ~PeriodicGrid();
  PeriodicGrid(const PeriodicGrid&) = delete;
  PeriodicGrid& operator=(const PeriodicGrid&) = delete;

  int N() const { return N_; }
  double L() const { return L_; }
  int nz() const { return N_ / 2 + 1; }
  std::size_t real_size() const { return static_cast<std::size_t>(N_) * N_ * N_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(N_) * N_ * nz(); }
  double dx() const;
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(real_size()); }

  /// Integer wavenumber of index i along a full axis.
  int mode(int i) const { return i <= N_ / 2 ? i : i - N_; }
  /// Integer triple of spectral slot s.
  std::array<int, 3> modes(std::size_t s) const;
  Vec3 wavevector(std::size_t s) const;
  /// 2/3 rule: false when any |m_i| > N/3.
  bool retained(std::size_t s) const { return mask_[s] != 0; }
  /// Multiplicity of a slot in the full spectrum (1 or 2).
  double weight(std::size_t s) const;

  void forward(const std::vector<double>& u, std::vector<cplx>& out) const;
  void backward(const std::vector<cplx>& coeffs, std::vector<double>& out) const;
  void apply_mask(std::vector<cplx>& coeffs) const;

 private:
  int N_;
  double L_;
  std::vector<unsigned char> mask_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Field order (n, w1, w2, w3, phi, psi1, psi2, psi3).
inline constexpr int kFields = 8;
using SpectralFields = std::array<std::vector<cplx>, kFields>;
using PhysicalFields = std::array<std::vector<double>, kFields>;

struct StateField {
  SpectralFields coeffs;
  double time = 0;
};

enum class DataKind { Random, SingleMode };

/// Random data: every mode with 0 < max|m_i| <= kmax gets a uniform random cosine
/// and sine amplitude per field; each field is scaled so the sum of absolute
/// amplitudes equals the requested amplitude (a sup bound independent of N).
/// Single mode: component `field` equals amplitude * cos(m1 x1 / L).
struct DataGenerator {
  DataKind kind = DataKind::Random;
  std::uint64_t seed = 20240611;
  int kmax = 2;
  int field = 0;
  int m1 = 1;
};

/// Throws AmplitudeTooLarge when min(1+n) <= 0.5 or the temperature factor is <= 0.5.
StateField init_state(const PeriodicGrid& grid, const DataGenerator& gen, double amplitude,
                      const NormalizedParams& np);

PhysicalFields to_physical(const PeriodicGrid& grid, const StateField& s);

/// Dealiased tendencies (f1, f2, f3, 0). Throws VacuumBreach if 1+n <= 0 on the grid.
SpectralFields rhs_nonlinear(const PeriodicGrid& grid, const StateField& s, const NormalizedParams& np);

/// exp(-B(k) t) applied to every retained mode.
StateField propagate_linear(const PeriodicGrid& grid, const StateField& s, double t,
                            const NormalizedParams& np);

/// Largest stable step of the advective bound 0.5 dx / max|c w|; infinite for w = 0.
double cfl_limit(const PeriodicGrid& grid, const StateField& s, const NormalizedParams& np);

/// Strang splitting: exact half step of the linear flow, explicit midpoint step of
/// the nonlinearity, exact half step. Linear half-step propagators are cached per dt.
class Stepper {
 public:
  Stepper(const PeriodicGrid& grid, const NormalizedParams& np);

  /// Throws CFLViolation, VacuumBreach (1+n <= 0.25) or NegativeTemperature
  /// (1 + sqrt(gamma-1) phi <= 0.25).
  StateField step(const StateField& s, double dt);

 private:
  void prepare(double dt);
  const PeriodicGrid& grid_;
  NormalizedParams np_;
  double cached_dt_ = -1;
  std::vector<std::size_t> slots_;
  std::vector<Mat8> half_;
};

struct MonitorRow {
  double time = 0;
  double mass = 0;
  double energy = 0;
  double entropy = 0;
  double h3_fluid = 0;
  double h3_psi = 0;
  double min_density = 0;
  double dt = 0;
};

/// Monitors by grid quadrature on [0, 2 pi L)^3 in original variables.
MonitorRow monitors(const PeriodicGrid& grid, const StateField& s, const NormalizedParams& np);

struct MonitorReport {
  std::vector<MonitorRow> rows;
  std::size_t steps = 0;
  double dt_min = 0;
  double dt_max = 0;
  double dt_mean = 0;
};

struct NonlinearConfig {
  int N = 16;
  double L = 1.0;
  double amplitude = 1e-3;
  DataGenerator data;
  double tmax = 10.0;
  double dt = 0.05;
  /// When positive, dt_n = min(dt, cfl * dx / max|c w|).
  double cfl = 0.0;
  int monitor_every = 1;
  int snapshot_every = 0;
  std::string snapshot_prefix;
};

struct RunResult {
  MonitorReport report;
  StateField initial;
  StateField final_state;
  bool completed = false;
  std::string error;
};

/// Fixed-step (cfl = 0) or adaptive loop. Step errors end the run with the partial
/// report retained and the message stored in `error`.
RunResult run(const NonlinearConfig& cfg, const NormalizedParams& np);

/// Binary snapshot: int64 N, double L, double time, then eight blocks of
/// N*N*(N/2+1) complex coefficients, Re/Im interleaved, little-endian.
void write_snapshot(const std::string& path, const PeriodicGrid& grid, const StateField& s);
StateField read_snapshot(const std::string& path, int& N, double& L);

std::string monitor_csv(const MonitorReport& r);

/// L2 norm over the box of the difference of two states, all fields.
double state_distance(const PeriodicGrid& grid, const StateField& a, const StateField& b);

}  // namespace nsclab
