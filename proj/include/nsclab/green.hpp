#pragma once

#include <array>
#include <string_view>

#include "nsclab/params.hpp"
#include "nsclab/symbol.hpp"
#include "nsclab/types.hpp"

namespace nsclab {

enum class GreenMethod { Explicit, Expm, LowFreq };

std::string_view to_string(GreenMethod m);
GreenMethod parse_green_method(std::string_view s);

/// Fourier-space propagator G(xi, t) = exp(-B(xi) t).
struct GreenMatrix {
  Mat8 entries;
  Vec3 xi;
  double t = 0;
  GreenMethod method = GreenMethod::Explicit;
};

/// g_k = l^2 + l/tau + b^2 r^2 and h_k = l^2 + (2nu+eta) r^2 l + c^2 r^2 at l = lambda_{3+i}.
struct SpectralWeights {
  std::array<cplx, 4> g;
  std::array<cplx, 4> h;
};

SpectralWeights gk_hk(const EigenSet& eigs, const NormalizedParams& np);

/// Per-root coefficients of the ten entry families of G. Each multiplies
/// exp(lambda_k t) and the vector factor of its family: f12, f14, f23, f34
/// multiply i xi; f22, f24, f44 multiply xi xi^T (f22 and f44 already carry
/// the 1/|xi|^2); the rest are scalars.
struct EntryFamilies {
  std::array<cplx, 4> lambda;
  std::array<cplx, 4> f11, f12, f13, f14, f22, f23, f24, f33, f34, f44;
};

/// Minimal pairwise separation of lambda3..lambda6 relative to their largest modulus.
double relative_root_separation(const EigenSet& eigs);

inline constexpr double kCollisionThreshold = 1e-6;

/// Throws EigenvalueCollision when relative_root_separation < collision_threshold.
EntryFamilies entry_families(const EigenSet& eigs, const NormalizedParams& np,
                             double collision_threshold = kCollisionThreshold);

/// Spectral-sum formulas. Requires |xi| > 0; throws EigenvalueCollision near
/// coincident roots, in which case green_expm is the fallback.
GreenMatrix green_explicit(const Vec3& xi, double t, const NormalizedParams& np,
                           double collision_threshold = kCollisionThreshold);

/// exp(-B t) by scaling and squaring; valid at collisions and at xi = 0.
GreenMatrix green_expm(const Vec3& xi, double t, const NormalizedParams& np);

/// Leading-order low-frequency entries with exact eigenvalues. Throws OutOfBand if |xi| > r0.
GreenMatrix green_lowfreq_leading(const Vec3& xi, double t, const NormalizedParams& np,
                                  double r0 = 0.1);

/// Explicit formulas when roots are separated, matrix exponential otherwise.
GreenMatrix green_auto(const Vec3& xi, double t, const NormalizedParams& np);

GreenMatrix green(const Vec3& xi, double t, const NormalizedParams& np, GreenMethod method);

Vec8 apply_green(const GreenMatrix& G, const Vec8& u0_hat);

/// exp(-M t) for the longitudinal block M at a fixed radius, reusing one root
/// solve across many times. Uses the spectral sum unless the roots collide.
class LongitudinalPropagator {
 public:
  LongitudinalPropagator(double r, const NormalizedParams& np,
                         double collision_threshold = kCollisionThreshold);

  Mat4 at(double t) const;
  /// at(t) * u0 without forming the matrix.
  Vec4 apply(double t, const Vec4& u0) const;

  bool spectral() const { return spectral_; }
  const EigenSet& eigs() const { return eigs_; }
  /// Residue matrices: exp(-M t) = sum_k exp(lambda_k t) residue(k).
  const std::array<Mat4, 4>& residues() const { return residues_; }

 private:
  EigenSet eigs_;
  Mat4 block_;
  bool spectral_ = false;
  std::array<Mat4, 4> residues_{};
};

}  // namespace nsclab
