#include "nsclab/fouriermodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nsclab/expm.hpp"
#include "nsclab/symbol.hpp"

namespace nsclab {

FourierSymbol build_symbol_fourier(const Vec3& xi, const NormalizedParams& np) {
  const double r2 = xi.squaredNorm();
  Mat5 B = Mat5::Zero();
  for (int i = 0; i < 3; ++i) {
    B(0, 1 + i) = B(1 + i, 0) = kI * np.c * xi(i);
    B(1 + i, 4) = B(4, 1 + i) = kI * np.sigma * xi(i);
    for (int j = 0; j < 3; ++j) {
      B(1 + i, 1 + j) = (np.nu + np.eta) * xi(i) * xi(j) + (i == j ? np.nu * r2 : 0.0);
    }
  }
  B(4, 4) = np.kappa_prime() * r2;
  return {B, xi};
}

Mat3 fourier_longitudinal_block(double r, const NormalizedParams& np) {
  Mat3 M = Mat3::Zero();
  M(0, 1) = M(1, 0) = kI * np.c * r;
  M(1, 1) = np.two_nu_eta() * r * r;
  M(1, 2) = M(2, 1) = kI * np.sigma * r;
  M(2, 2) = np.kappa_prime() * r * r;
  return M;
}

std::array<double, 4> fourier_cubic(double r, const NormalizedParams& np) {
  const double r2 = r * r, D = np.two_nu_eta(), k = np.kappa_prime();
  const double c2 = np.c * np.c, s2 = np.sigma * np.sigma;
  return {1.0, (D + k) * r2, (c2 + s2) * r2 + D * k * r2 * r2, c2 * k * r2 * r2};
}

std::array<cplx, 3> fourier_roots(double r, const NormalizedParams& np) {
  const auto c = fourier_cubic(r, np);
  const auto v = polynomial_roots(c);
  std::array<cplx, 3> out{v[0], v[1], v[2]};
  // Real roots first, then the upper and lower members of a conjugate pair.
  auto key = [](cplx z) { return std::pair{z.imag() == 0.0 ? 0 : (z.imag() > 0.0 ? 1 : 2), z.real()}; };
  std::sort(out.begin(), out.end(), [&](cplx a, cplx b) { return key(a) < key(b); });
  return out;
}

FourierPropagator::FourierPropagator(double r, const NormalizedParams& np, double collision_threshold)
    : roots_(fourier_roots(r, np)), block_(fourier_longitudinal_block(r, np)) {
  if (!(r > 0.0)) return;
  double scale = 0.0, sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    scale = std::max(scale, std::abs(roots_[i]));
    for (int j = i + 1; j < 3; ++j) sep = std::min(sep, std::abs(roots_[i] - roots_[j]));
  }
  if (!(scale > 0.0) || sep < collision_threshold * scale) return;
  const Mat3 A = -block_;
  for (int k = 0; k < 3; ++k) {
    Mat3 R = Mat3::Identity();
    for (int j = 0; j < 3; ++j) {
      if (j == k) continue;
      R = R * (A - roots_[j] * Mat3::Identity()) / (roots_[k] - roots_[j]);
    }
    residues_[k] = R;
  }
  spectral_ = true;
}

Mat3 FourierPropagator::at(double t) const {
  if (t == 0.0) return Mat3::Identity();
  if (!spectral_) return expm((-t) * block_);
  Mat3 G = Mat3::Zero();
  for (int k = 0; k < 3; ++k) G += std::exp(roots_[k] * t) * residues_[k];
  return G;
}

Vec3c FourierPropagator::apply(double t, const Vec3c& u0) const {
  if (t == 0.0) return u0;
  if (!spectral_) return expm((-t) * block_) * u0;
  Vec3c out = Vec3c::Zero();
  for (int k = 0; k < 3; ++k) out += std::exp(roots_[k] * t) * (residues_[k] * u0);
  return out;
}

Vec4 fourier_longitudinal(const RadialDataSpec& data, double r, double t, const NormalizedParams& np) {
  const Vec4 full = data.longitudinal(r);
  const Vec3c u0(full(0), full(1), full(2));
  Vec3c u = u0;
  if (!u0.isZero(0.0)) u = FourierPropagator(r, np).apply(t, u0);
  const cplx psi = -np.tau * np.b * kI * r * u(2);
  return Vec4(u(0), u(1), u(2), psi);
}

NormSeries evolve_series_fourier(const RadialDataSpec& data, std::span<const double> times,
                                 std::span<const NormRequest> requests, const NormalizedParams& np,
                                 const LinsimOptions& opts) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw std::invalid_argument("evolve_series_fourier: times must be nonnegative");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("evolve_series_fourier: times must be increasing");
    }
  }
  for (const auto& q : requests) {
    if (q.ell > 0.0) throw std::invalid_argument("evolve_series_fourier: negative norms are not supported");
  }
  if (!(data.support > 0.0) || !std::isfinite(data.support)) {
    throw std::invalid_argument("evolve_series_fourier: data support must be positive and finite");
  }

  const DecayEnvelope envelope([&np](double r) {
    double rate = np.nu * r * r;
    for (const auto& l : fourier_roots(r, np)) rate = std::min(rate, -l.real());
    return rate;
  });
  const double A0 = data.A0 > 0.0 ? data.A0 : 1.0;

  NormSeries out;
  out.times.assign(times.begin(), times.end());
  for (const auto& q : requests) out.columns.push_back({q, {}, {}});
  bool bands = false;
  int kmax = 0;
  for (const auto& q : requests) {
    bands = bands || q.band != NormBand::Full;
    kmax = std::max(kmax, q.k);
  }

  for (const double t : times) {
    const double end = envelope.cutoff_radius(t, opts.decay_cutoff, data.support);
    std::vector<double> bp{0.0};
    for (double b : data.breakpoints)
      if (b > 0.0 && b < end) bp.push_back(b);
    if (bands)
      for (double b : {opts.bands.r0, opts.bands.R0})
        if (b > 0.0 && b < end) bp.push_back(b);
    bp.push_back(end);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    quad::Options qo;
    qo.rel_tol = opts.rel_tol;
    qo.max_panels = opts.max_panels;
    qo.max_width = t > 0.0 ? std::numbers::pi / (np.c_hat() * t) : std::numeric_limits<double>::infinity();
    qo.abs_tol = 1e-26 * A0 * A0 * std::pow(std::max(1.0, end), 3 + 2 * (kmax + 1));

    const auto f = [&](double r) -> std::array<double, 4> {
      const Vec4 u = fourier_longitudinal(data, r, t, np);
      const double wp = data.transverse_w(r) * std::exp(-np.nu * r * r * t);
      return {std::norm(u(0)), std::norm(u(1)) + wp * wp, std::norm(u(2)), std::norm(u(3))};
    };
    const auto res = radial_norms(f, requests, bp, qo, opts.bands);
    for (std::size_t j = 0; j < requests.size(); ++j) {
      out.columns[j].values.push_back(res.values[j]);
      out.columns[j].errors.push_back(res.errors[j]);
    }
  }
  return out;
}

RelaxationReport relaxation_limit(const PhysicalParams& base, std::span<const double> taus,
                                  std::span<const double> radii, double order_lo, double order_hi) {
  if (taus.size() < 2) throw std::invalid_argument("relaxation_limit: need at least two tau values");
  RelaxationReport rep;
  rep.taus.assign(taus.begin(), taus.end());
  rep.radii.assign(radii.begin(), radii.end());

  std::vector<std::vector<double>> err(taus.size(), std::vector<double>(radii.size()));
  for (std::size_t i = 0; i < taus.size(); ++i) {
    PhysicalParams p = base;
    p.tau = taus[i];
    const NormalizedParams np = normalize(p);
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double r = radii[j];
      const auto cat = eigen_set(r, np).longitudinal;
      const auto fou = fourier_roots(r, np);
      // Leave one Cattaneo root out, match the rest optimally.
      double best = std::numeric_limits<double>::infinity(), best_max = 0.0;
      cplx fast{};
      for (int skip = 0; skip < 4; ++skip) {
        std::array<int, 3> idx{};
        for (int k = 0, m = 0; k < 4; ++k)
          if (k != skip) idx[m++] = k;
        std::sort(idx.begin(), idx.end());
        do {
          double total = 0.0, mx = 0.0;
          for (int k = 0; k < 3; ++k) {
            const double d = std::abs(cat[idx[k]] - fou[k]);
            total += d;
            mx = std::max(mx, d);
          }
          if (total < best) {
            best = total;
            best_max = mx;
            fast = cat[skip];
          }
        } while (std::next_permutation(idx.begin(), idx.end()));
      }
      err[i][j] = best_max;
      rep.points.push_back({taus[i], r, best_max, taus[i] * fast.real()});
    }
  }

  rep.pass = true;
  rep.orders.assign(radii.size(), {});
  for (std::size_t j = 0; j < radii.size(); ++j) {
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
      const double o = std::log10(err[i][j] / err[i + 1][j]) / std::log10(taus[i] / taus[i + 1]);
      rep.orders[j].push_back(o);
    }
    const double last = rep.orders[j].back();
    if (!(last >= order_lo && last <= order_hi)) rep.pass = false;
  }
  for (const auto& pt : rep.points) {
    if (pt.tau == rep.taus.back() && std::abs(pt.fast_scaled + 1.0) > 0.1) rep.pass = false;
  }
  return rep;
}

}  // namespace nsclab
