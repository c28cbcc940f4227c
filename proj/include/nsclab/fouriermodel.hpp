#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nsclab/linsim.hpp"
#include "nsclab/params.hpp"
#include "nsclab/types.hpp"

namespace nsclab {

using Mat5 = Eigen::Matrix<cplx, 5, 5>;
using Mat3 = Eigen::Matrix<cplx, 3, 3>;
using Vec3c = Eigen::Matrix<cplx, 3, 1>;

/// Linearized Navier-Stokes-Fourier symbol in the ordering (n, w1..3, phi).
/// The acoustic blocks equal those of the Cattaneo symbol; the heat flux is
/// replaced by the diffusion entry kappa' |xi|^2 on the phi diagonal, kappa' = tau b^2.
struct FourierSymbol {
  Mat5 entries;
  Vec3 xi;
};

FourierSymbol build_symbol_fourier(const Vec3& xi, const NormalizedParams& np);

/// Longitudinal 3x3 block in the ordering (n, w.e, phi).
Mat3 fourier_longitudinal_block(double r, const NormalizedParams& np);

/// Coefficients (1, a2, a1, a0) of det(lambda + M_F) = 0, highest degree first.
std::array<double, 4> fourier_cubic(double r, const NormalizedParams& np);

/// Roots of the cubic: eigenvalues of -M_F, labelled (fast real, acoustic +, acoustic -)
/// by matching the low-frequency picture; order is stable but not a branch identity.
std::array<cplx, 3> fourier_roots(double r, const NormalizedParams& np);

/// exp(-M_F t) at one radius by Sylvester's formula on the cubic roots, with a
/// matrix-exponential fallback at (near) coincident roots or r = 0.
class FourierPropagator {
 public:
  FourierPropagator(double r, const NormalizedParams& np, double collision_threshold = 1e-6);

  Mat3 at(double t) const;
  Vec3c apply(double t, const Vec3c& u0) const;
  bool spectral() const { return spectral_; }
  const std::array<cplx, 3>& roots() const { return roots_; }

 private:
  std::array<cplx, 3> roots_{};
  Mat3 block_;
  bool spectral_ = false;
  std::array<Mat3, 3> residues_{};
};

/// Norm series of the Fourier model for data restricted to (n, w, phi). The psi
/// column reports psi_F = -tau b grad phi, i.e. psi_F_hat = -tau b (i xi) phi_hat.
NormSeries evolve_series_fourier(const RadialDataSpec& data, std::span<const double> times,
                                 std::span<const NormRequest> requests, const NormalizedParams& np,
                                 const LinsimOptions& opts = {});

/// (n, w.e, phi, psi_F.e) of the Fourier evolution at radius r and time t.
Vec4 fourier_longitudinal(const RadialDataSpec& data, double r, double t, const NormalizedParams& np);

struct RelaxationPoint {
  double tau = 0;
  double r = 0;
  /// Largest distance between a Fourier root and its matched Cattaneo root.
  double branch_error = 0;
  /// tau times the unmatched Cattaneo root; tends to -1.
  double fast_scaled = 0;
};

struct RelaxationReport {
  std::vector<double> taus;
  std::vector<double> radii;
  std::vector<RelaxationPoint> points;
  /// Per radius: log10(err(tau_{i}) / err(tau_{i+1})) / log10(tau_i / tau_{i+1}).
  std::vector<std::vector<double>> orders;
  bool pass = false;
};

/// Relaxation limit tau -> 0 at fixed kappa (so kappa' is fixed): the three
/// Fourier roots are matched to three of the four Cattaneo roots, the fourth
/// tends to -1/tau. Passes when every observed order is in [order_lo, order_hi]
/// and every tau * fast root is within 0.1 of -1 at the smallest tau.
RelaxationReport relaxation_limit(const PhysicalParams& base, std::span<const double> taus,
                                  std::span<const double> radii, double order_lo = 0.8,
                                  double order_hi = 1.2);

}  // namespace nsclab
