#include "nsclab/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nsclab/errors.hpp"
#include "nsclab/expm.hpp"

namespace nsclab {

std::string_view to_string(GreenMethod m) {
  switch (m) {
    case GreenMethod::Explicit: return "explicit";
    case GreenMethod::Expm: return "expm";
    case GreenMethod::LowFreq: return "lowfreq";
  }
  return "?";
}

GreenMethod parse_green_method(std::string_view s) {
  if (s == "explicit") return GreenMethod::Explicit;
  if (s == "expm") return GreenMethod::Expm;
  if (s == "lowfreq") return GreenMethod::LowFreq;
  throw std::invalid_argument("unknown Green method '" + std::string(s) + "'");
}

SpectralWeights gk_hk(const EigenSet& eigs, const NormalizedParams& np) {
  const double r2 = eigs.r * eigs.r;
  SpectralWeights w;
  for (int k = 0; k < 4; ++k) {
    const cplx l = eigs.longitudinal[k];
    w.g[k] = l * l + l / np.tau + np.b * np.b * r2;
    w.h[k] = l * l + np.two_nu_eta() * r2 * l + np.c * np.c * r2;
  }
  return w;
}

double relative_root_separation(const EigenSet& eigs) {
  double sep = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    scale = std::max(scale, std::abs(eigs.longitudinal[i]));
    for (int j = i + 1; j < 4; ++j) {
      sep = std::min(sep, std::abs(eigs.longitudinal[i] - eigs.longitudinal[j]));
    }
  }
  return scale > 0.0 ? sep / scale : 0.0;
}

EntryFamilies entry_families(const EigenSet& eigs, const NormalizedParams& np,
                             double collision_threshold) {
  if (!(eigs.r > 0.0)) throw std::invalid_argument("entry_families: need |xi| > 0");
  if (const double sep = relative_root_separation(eigs); !(sep >= collision_threshold)) {
    throw EigenvalueCollision("relative root separation " + std::to_string(sep) +
                              " below threshold at r=" + std::to_string(eigs.r));
  }
  const auto w = gk_hk(eigs, np);
  const double r2 = eigs.r * eigs.r;
  const double c = np.c, s = np.sigma, b = np.b, inv_tau = 1.0 / np.tau;

  EntryFamilies f;
  f.lambda = eigs.longitudinal;
  for (int k = 0; k < 4; ++k) {
    const cplx l = eigs.longitudinal[k];
    cplx prod = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != k) prod *= l - eigs.longitudinal[j];
    const cplx g = w.g[k], h = w.h[k];

    f.f11[k] = -c * c * r2 * g / (l * prod);
    f.f12[k] = -c * g / prod;
    f.f13[k] = -c * s * r2 * (l + inv_tau) / prod;
    f.f14[k] = c * s * b * r2 / prod;
    f.f22[k] = g * l / (r2 * prod);
    f.f23[k] = -s * l * (l + inv_tau) / prod;
    f.f24[k] = -s * b * l / prod;
    f.f33[k] = (l + inv_tau) * h / prod;
    f.f34[k] = -b * h / prod;
    f.f44[k] = l * (h + s * s * r2) / (r2 * prod);
  }
  return f;
}

namespace {

cplx spectral_sum(const std::array<cplx, 4>& coeff, const std::array<cplx, 4>& expo) {
  return coeff[0] * expo[0] + coeff[1] * expo[1] + coeff[2] * expo[2] + coeff[3] * expo[3];
}

// Fills G from the scalar multipliers of each block; the vector factors
// (i xi, xi xi^T, transverse projector) are applied here.
struct BlockValues {
  cplx g11, g12, g13, g14, g22, g23, g24, g33, g34, g44;  // multipliers of the family factors
  cplx transverse_w, transverse_psi;                      // multipliers of (I - e e^T)
};

Mat8 assemble(const Vec3& xi, const BlockValues& v) {
  const double r = xi.norm();
  const Vec3 e = xi / r;
  Mat8 G = Mat8::Zero();
  G(0, 0) = v.g11;
  G(0, 4) = G(4, 0) = v.g13;
  G(4, 4) = v.g33;
  for (int i = 0; i < 3; ++i) {
    const cplx ixi = kI * xi(i);
    G(0, 1 + i) = G(1 + i, 0) = v.g12 * ixi;
    G(0, 5 + i) = G(5 + i, 0) = v.g14 * ixi;
    G(1 + i, 4) = G(4, 1 + i) = v.g23 * ixi;
    G(4, 5 + i) = G(5 + i, 4) = v.g34 * ixi;
    for (int j = 0; j < 3; ++j) {
      const double xx = xi(i) * xi(j);
      const double transverse = (i == j ? 1.0 : 0.0) - e(i) * e(j);
      G(1 + i, 1 + j) = v.g22 * xx + v.transverse_w * transverse;
      G(1 + i, 5 + j) = G(5 + j, 1 + i) = v.g24 * xx;
      G(5 + i, 5 + j) = v.g44 * xx + v.transverse_psi * transverse;
    }
  }
  return G;
}

}  // namespace

GreenMatrix green_explicit(const Vec3& xi, double t, const NormalizedParams& np,
                           double collision_threshold) {
  const double r = xi.norm();
  if (!(r > 0.0)) throw std::invalid_argument("green_explicit: need |xi| > 0");
  const EigenSet eigs = eigen_set(r, np);
  const EntryFamilies f = entry_families(eigs, np, collision_threshold);
  std::array<cplx, 4> ex;
  for (int k = 0; k < 4; ++k) ex[k] = std::exp(f.lambda[k] * t);

  BlockValues v;
  v.g11 = spectral_sum(f.f11, ex);
  v.g12 = spectral_sum(f.f12, ex);
  v.g13 = spectral_sum(f.f13, ex);
  v.g14 = spectral_sum(f.f14, ex);
  v.g22 = spectral_sum(f.f22, ex);
  v.g23 = spectral_sum(f.f23, ex);
  v.g24 = spectral_sum(f.f24, ex);
  v.g33 = spectral_sum(f.f33, ex);
  v.g34 = spectral_sum(f.f34, ex);
  v.g44 = spectral_sum(f.f44, ex);
  v.transverse_w = std::exp(eigs.lambda1 * t);
  v.transverse_psi = std::exp(eigs.lambda2 * t);
  return {assemble(xi, v), xi, t, GreenMethod::Explicit};
}

GreenMatrix green_expm(const Vec3& xi, double t, const NormalizedParams& np) {
  if (t < 0.0) throw std::invalid_argument("green_expm: need t >= 0");
  const Mat8 B = build_symbol(xi, np).entries;
  return {expm((-t) * B), xi, t, GreenMethod::Expm};
}

GreenMatrix green_lowfreq_leading(const Vec3& xi, double t, const NormalizedParams& np,
                                  double r0) {
  const double r = xi.norm();
  if (r > r0) {
    throw OutOfBand("green_lowfreq_leading: |xi|=" + std::to_string(r) + " exceeds r0=" +
                    std::to_string(r0));
  }
  if (!(r > 0.0)) throw std::invalid_argument("green_lowfreq_leading: need |xi| > 0");
  const EigenSet eigs = eigen_set(r, np);
  const double c = np.c, s = np.sigma, b = np.b, tau = np.tau;
  const double c2 = c * c, s2 = s * s, b2 = b * b;
  const double cs = c2 + s2, ch = std::sqrt(cs);
  const double r2 = r * r;
  const cplx E3 = std::exp(eigs.longitudinal[0] * t);
  const cplx E4 = std::exp(eigs.longitudinal[1] * t);
  const cplx E5 = std::exp(eigs.longitudinal[2] * t);
  const cplx E6 = std::exp(eigs.longitudinal[3] * t);

  // Terms carrying xi/|xi| (no i) are rewritten as multipliers of i xi:
  // xi/|xi| = (-i / |xi|) (i xi). Terms with xi xi^T/|xi|^2 become xi xi^T / r^2.
  const cplx unit = -kI / r;
  BlockValues v;
  v.g11 = -c2 * b2 * b2 * std::pow(tau, 6) * std::pow(r, 6) * E3 + c2 / (2 * cs) * E4 +
          c2 / (2 * cs) * E5 + s2 / cs * E6;
  v.g12 = c * b2 * b2 * std::pow(tau, 5) * r2 * r2 * E3 - c / (2 * ch) * unit * E4 +
          c / (2 * ch) * unit * E5 - c * b2 * s2 * tau / (cs * cs) * E6;
  v.g13 = c * b2 * s * std::pow(tau, 4) * r2 * r2 * E3 + c * s / (2 * cs) * E4 +
          c * s / (2 * cs) * E5 - c * s / cs * E6;
  v.g14 = -c * b * s * std::pow(tau, 3) * r2 * E3 - c * b * s * tau / (2 * cs) * E4 +
          c * b * s * tau / (2 * cs) * E5 + c * b * s * tau / cs * E6;
  v.g22 = b2 * b2 * std::pow(tau, 4) * r2 * E3 + 0.5 / r2 * E4 + 0.5 / r2 * E5 -
          c2 * b2 * b2 * s2 * tau * tau / (cs * cs * cs) * E6;
  v.g23 = -b2 * s * std::pow(tau, 3) * r2 * E3 - s / (2 * ch) * unit * E4 +
          s / (2 * ch) * unit * E5 + c2 * b2 * s * tau / (cs * cs) * E6;
  v.g24 = -b * s * tau * tau * E3 + kI * b * s * tau / (2 * ch * r) * E4 -
          kI * b * s * tau / (2 * ch * r) * E5 + c2 * b2 * b * s * tau * tau / (cs * cs) * E6;
  v.g33 = -b2 * tau * tau * r2 * E3 + s2 / (2 * cs) * E4 + s2 / (2 * cs) * E5 + c2 / cs * E6;
  v.g34 = b * tau * E3 - b * s2 * tau / (2 * cs) * E4 - b * s2 * tau / (2 * cs) * E5 -
          c2 * b * tau / cs * E6;
  v.g44 = 1.0 / r2 * E3 - b2 * s2 * tau * tau / (2 * cs) * E4 -
          b2 * s2 * tau * tau / (2 * cs) * E5 - c2 * b2 * tau * tau / cs * E6;
  v.transverse_w = std::exp(eigs.lambda1 * t);
  v.transverse_psi = std::exp(eigs.lambda2 * t);
  return {assemble(xi, v), xi, t, GreenMethod::LowFreq};
}

GreenMatrix green_auto(const Vec3& xi, double t, const NormalizedParams& np) {
  if (xi.norm() > 0.0) {
    try {
      return green_explicit(xi, t, np);
    } catch (const EigenvalueCollision&) {
    }
  }
  return green_expm(xi, t, np);
}

GreenMatrix green(const Vec3& xi, double t, const NormalizedParams& np, GreenMethod method) {
  switch (method) {
    case GreenMethod::Explicit: return green_explicit(xi, t, np);
    case GreenMethod::Expm: return green_expm(xi, t, np);
    case GreenMethod::LowFreq: return green_lowfreq_leading(xi, t, np);
  }
  throw std::invalid_argument("unknown Green method");
}

Vec8 apply_green(const GreenMatrix& G, const Vec8& u0_hat) { return G.entries * u0_hat; }

LongitudinalPropagator::LongitudinalPropagator(double r, const NormalizedParams& np,
                                               double collision_threshold)
    : eigs_(eigen_set(r, np)), block_(longitudinal_block(r, np)) {
  if (!(r > 0.0) || relative_root_separation(eigs_) < collision_threshold) return;
  const EntryFamilies f = entry_families(eigs_, np, collision_threshold);
  const cplx ir = kI * r;
  const double r2 = r * r;
  for (int k = 0; k < 4; ++k) {
    Mat4& R = residues_[k];
    R(0, 0) = f.f11[k];
    R(0, 1) = R(1, 0) = f.f12[k] * ir;
    R(0, 2) = R(2, 0) = f.f13[k];
    R(0, 3) = R(3, 0) = f.f14[k] * ir;
    R(1, 1) = f.f22[k] * r2;
    R(1, 2) = R(2, 1) = f.f23[k] * ir;
    R(1, 3) = R(3, 1) = f.f24[k] * r2;
    R(2, 2) = f.f33[k];
    R(2, 3) = R(3, 2) = f.f34[k] * ir;
    R(3, 3) = f.f44[k] * r2;
  }
  spectral_ = true;
}

Mat4 LongitudinalPropagator::at(double t) const {
  if (t == 0.0) return Mat4::Identity();
  if (!spectral_) return expm((-t) * block_);
  Mat4 G = Mat4::Zero();
  for (int k = 0; k < 4; ++k) G += std::exp(eigs_.longitudinal[k] * t) * residues_[k];
  return G;
}

Vec4 LongitudinalPropagator::apply(double t, const Vec4& u0) const {
  if (t == 0.0) return u0;
  if (!spectral_) return expm((-t) * block_) * u0;
  Vec4 out = Vec4::Zero();
  for (int k = 0; k < 4; ++k) out += std::exp(eigs_.longitudinal[k] * t) * (residues_[k] * u0);
  return out;
}

}  // namespace nsclab
