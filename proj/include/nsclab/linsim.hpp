#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nsclab/params.hpp"
#include "nsclab/quadrature.hpp"
#include "nsclab/types.hpp"

namespace nsclab {

/// Smooth low/high frequency split: chi1 = 1 on [0, r0], 0 on [R0, inf),
/// cubic smoothstep in between.
struct FrequencyBands {
  double r0 = 0.1;
  double R0 = 10.0;

  double chi1(double r) const;
  double chi_inf(double r) const { return 1.0 - chi1(r); }
};

/// Radially structured initial data in frequency space. Scalar profiles are
/// radial; the vector unknowns are longitudinal, w0_hat(xi) = i w0(|xi|) xi/|xi|
/// (same for psi), which keeps the physical fields real. Optional transverse
/// profiles give the magnitude of the component orthogonal to xi.
struct RadialDataSpec {
  using Profile = std::function<double(double)>;

  std::string kind;
  Profile n0, w0, phi0, psi0;
  Profile w_perp, psi_perp;
  /// Points in (0, support) where a profile or its derivative is not smooth.
  std::vector<double> breakpoints;
  /// All profiles vanish for r > support.
  double support = 0.0;
  double mu0 = 0.0;
  double r0 = 0.0;
  /// sup_r |U0_hat(r)|, the Fourier-side bound on ||U0||_{L^1}.
  double A0 = 0.0;

  /// (n0, i w0, phi0, i psi0) at radius r.
  Vec4 longitudinal(double r) const;
  double transverse_w(double r) const { return w_perp ? w_perp(r) : 0.0; }
  double transverse_psi(double r) const { return psi_perp ? psi_perp(r) : 0.0; }
};

/// n0 = mu0 chi1, every other profile zero.
RadialDataSpec make_lowerbound_data(double mu0, double r0, double R0);
/// Indicator of the ball |xi| <= radius in a single component (n, w, phi or psi).
RadialDataSpec make_indicator_data(double radius = 1.0, unsigned component = 1u);
/// amplitude_c * exp(-r^2 / (2 width^2)) for each scalar/longitudinal profile.
RadialDataSpec make_gaussian_data(const std::array<double, 4>& amplitudes, double width);
/// CSV with header r,n0,w0,phi0,psi0; piecewise linear in r, zero beyond the last row.
RadialDataSpec load_radial_data(const std::string& path);
/// Every profile zero.
RadialDataSpec make_zero_data();

namespace component {
inline constexpr unsigned n = 1u, w = 2u, phi = 4u, psi = 8u;
inline constexpr unsigned fluid = n | w | phi;
inline constexpr unsigned all = fluid | psi;
}  // namespace component

/// Parses "n", "w", "phi", "psi", "fluid", "all" or "+"-joined combinations.
unsigned parse_components(const std::string& s);
std::string components_label(unsigned set);

enum class NormBand { Full, Low, High };
NormBand parse_band(const std::string& s);
std::string to_string(NormBand b);

/// A requested column: || grad^k (components) || restricted to a band, or the
/// negative norm || Lambda^{-ell} (components) || when ell > 0.
struct NormRequest {
  unsigned components = component::fluid;
  int k = 0;
  NormBand band = NormBand::Full;
  double ell = 0.0;

  std::string label() const;
};

struct LinsimOptions {
  FrequencyBands bands{};
  /// Relative quadrature tolerance on the squared norms.
  double rel_tol = 1e-10;
  std::size_t max_panels = 400000;
  /// Decay exponent beyond which the solution amplitude is treated as zero.
  double decay_cutoff = 30.0;
};

/// Running minimum from the right of a decay rate on a log grid of radii:
/// beyond cutoff_radius(t) every mode has decayed by exp(-exponent).
class DecayEnvelope {
 public:
  DecayEnvelope() = default;
  explicit DecayEnvelope(const std::function<double(double)>& slowest_rate);

  double cutoff_radius(double t, double exponent, double support) const;

 private:
  std::vector<double> r_;
  std::vector<double> rate_;
};

/// Squared magnitudes of (n, w, phi, psi) at radius r, transverse parts included.
using ModeMagnitudes = std::function<std::array<double, 4>(double r)>;

struct RadialNorms {
  std::vector<double> values;
  std::vector<double> errors;
  quad::Result quadrature;
};

/// sqrt( int 4 pi r^2 r^{2k} w_band(r) sum_c |U_c|^2 dr ) for every request in one adaptive pass.
RadialNorms radial_norms(const ModeMagnitudes& f, std::span<const NormRequest> requests,
                         std::span<const double> breakpoints, const quad::Options& qo,
                         const FrequencyBands& bands);

/// Exact frequency-space evolution of radial data and its L^2-type norms.
/// Stateless after construction; every method may be called concurrently.
class RadialEvolution {
 public:
  RadialEvolution(RadialDataSpec data, const NormalizedParams& np, LinsimOptions opts = {});

  /// (n, w.e, phi, psi.e) at radius r and time t.
  Vec4 longitudinal(double r, double t) const;
  /// Pointwise |component|^2 summed over the set, including transverse parts.
  double squared_magnitude(double r, double t, unsigned components) const;
  std::array<double, 4> magnitudes(double r, double t) const;

  using Norms = RadialNorms;
  /// One adaptive radial pass for all nonnegative-order requests.
  Norms norms(double t, std::span<const NormRequest> requests) const;

  double sobolev_norm(double t, unsigned components, int k, NormBand band) const;
  /// Throws DivergentIntegral if r^{2-2 ell} |U|^2 is not integrable at 0.
  double negative_norm(double t, double ell, unsigned components) const;

  /// Largest radius carrying non-negligible amplitude at time t.
  double effective_radius(double t) const;
  /// Panel width cap resolving the oscillation of the acoustic and heat waves.
  double oscillation_width(double t) const;
  std::vector<double> breakpoints(double t, bool with_bands) const;

  const RadialDataSpec& data() const { return data_; }
  const NormalizedParams& params() const { return np_; }
  const LinsimOptions& options() const { return opts_; }

 private:
  RadialDataSpec data_;
  NormalizedParams np_;
  LinsimOptions opts_;
  DecayEnvelope envelope_;
  double wave_speed_ = 0.0;
};

double sobolev_norm(const RadialDataSpec& data, double t, unsigned components, int k,
                    NormBand band, const NormalizedParams& np, const LinsimOptions& opts = {});
double negative_norm(const RadialDataSpec& data, double t, double ell, unsigned components,
                     const NormalizedParams& np, const LinsimOptions& opts = {});

struct NormColumn {
  NormRequest request;
  std::vector<double> values;
  std::vector<double> errors;
};

struct NormSeries {
  std::vector<double> times;
  std::vector<NormColumn> columns;
  /// Regularity index of the diagnostics, or -1 when not requested.
  int diagnostics_s = -1;
  /// energy[k][i] = sum_{j=k..s} || grad^j (n,w,phi,psi)(t_i) ||^2
  std::vector<std::vector<double>> energy;
  /// sup over sampled times <= t_i of (1+t)^{3/4} || (n,w,phi,psi) ||_{H^s}
  std::vector<double> sup_weighted;
  /// grad_norms[j][i] = || grad^j (n,w,phi,psi)(t_i) ||, the columns behind `energy`.
  std::vector<std::vector<double>> grad_norms;

  const NormColumn& column(const std::string& label) const;
};

/// Norm columns (and optional diagnostics) at each time, one quadrature pass per time.
NormSeries evolve_series(const RadialDataSpec& data, std::span<const double> times,
                         std::span<const NormRequest> requests, const NormalizedParams& np,
                         int diagnostics_s = -1, const LinsimOptions& opts = {});

struct ReconstructionResult {
  double t = 0;
  double psi_norm = 0;           // || psi(t) || from the direct evolution
  double discrepancy = 0;        // || psi_reconstructed - psi ||
  double naive_discrepancy = 0;  // || exp(-t/tau) psi0 - psi ||
  double relative() const;
};

/// Damping form of the heat-flux equation:
///   psi(t) = exp(-t/tau) psi0 - b int_0^t exp(-(t-s)/tau) (i xi) phi(s) ds,
/// evaluated per radial sample with adaptive time quadrature on the exact phi.
std::complex<double> reconstruct_psi(const RadialEvolution& ev, double r, double t);
ReconstructionResult duhamel_reconstruct_psi(const RadialDataSpec& data, double t,
                                             const NormalizedParams& np,
                                             const LinsimOptions& opts = {});

/// 4 pi mu0^2 t^{-3/2} int_0^{r0 sqrt t} exp(-(nu1+nu2) m^2) (1 + cos(c_hat m sqrt t))^2 m^2 dm
/// with panels no wider than pi / (c_hat sqrt t).
double z1_lower_integral(double t, double mu0, const NormalizedParams& np, double r0 = 0.1);
/// Its t -> infinity limit of value * t^{3/2}: 4 pi mu0^2 (3/2) sqrt(pi) / (4 (nu1+nu2)^{3/2}).
double z1_asymptotic_constant(double mu0, const NormalizedParams& np);

/// Acoustic damping nu1 and thermal diffusion nu2 rates of the low-frequency branches.
double acoustic_damping_rate(const NormalizedParams& np);
double thermal_diffusion_rate(const NormalizedParams& np);

}  // namespace nsclab
