#include "nsclab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "nsclab/errors.hpp"

namespace nsclab {

SymbolMatrix build_symbol(const Vec3& xi, const NormalizedParams& np) {
  const double r2 = xi.squaredNorm();
  Mat8 B = Mat8::Zero();
  for (int i = 0; i < 3; ++i) {
    B(0, 1 + i) = kI * np.c * xi(i);
    B(1 + i, 0) = kI * np.c * xi(i);
    B(1 + i, 4) = kI * np.sigma * xi(i);
    B(4, 1 + i) = kI * np.sigma * xi(i);
    B(4, 5 + i) = kI * np.b * xi(i);
    B(5 + i, 4) = kI * np.b * xi(i);
    B(5 + i, 5 + i) = 1.0 / np.tau;
    for (int j = 0; j < 3; ++j) {
      B(1 + i, 1 + j) = (np.nu + np.eta) * xi(i) * xi(j) + (i == j ? np.nu * r2 : 0.0);
    }
  }
  return {B, xi};
}

Mat4 longitudinal_block(double r, const NormalizedParams& np) {
  Mat4 M = Mat4::Zero();
  M(0, 1) = M(1, 0) = kI * np.c * r;
  M(1, 1) = np.two_nu_eta() * r * r;
  M(1, 2) = M(2, 1) = kI * np.sigma * r;
  M(2, 3) = M(3, 2) = kI * np.b * r;
  M(3, 3) = 1.0 / np.tau;
  return M;
}

double QuarticCoeffs::max_abs() const {
  return std::max({std::abs(a4), std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0)});
}

QuarticCoeffs longitudinal_quartic(double r, const NormalizedParams& np) {
  const double r2 = r * r;
  const double D = np.two_nu_eta();
  const double c2 = np.c * np.c, s2 = np.sigma * np.sigma, b2 = np.b * np.b;
  QuarticCoeffs q;
  q.a4 = np.tau;
  q.a3 = 1.0 + np.tau * D * r2;
  q.a2 = (np.tau * (c2 + b2 + s2) + D) * r2;
  q.a1 = (c2 + s2 + np.tau * b2 * D * r2) * r2;
  q.a0 = np.tau * c2 * b2 * r2 * r2;
  return q;
}

namespace {

// Radix-2 diagonal similarity equalizing row and column norms (Parlett-Reinsch).
// Without it the clustered small roots at low frequency lose most of their digits.
void balance(Eigen::MatrixXd& a) {
  const double radix = 2.0, sqrdx = radix * radix;
  const auto n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<cplx> polynomial_roots(std::span<const double> coeffs) {
  if (coeffs.empty() || coeffs[0] == 0.0) throw Degenerate("leading polynomial coefficient is zero");
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = coeffs[i + 1] / coeffs[0];
  std::vector<cplx> roots(n, cplx(0.0, 0.0));

  // Exact zero roots deflate; the companion matrix of a nilpotent block would
  // otherwise return cube-root-of-epsilon noise.
  int degree = n;
  while (degree > 0 && c[degree - 1] == 0.0) --degree;

  if (degree > 0) {
    double scale = 0.0;
    for (int i = 0; i < degree; ++i) {
      scale = std::max(scale, std::pow(std::abs(c[i]), 1.0 / (i + 1)));
    }
    if (scale == 0.0) scale = 1.0;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 0; i < degree; ++i) {
      companion(0, i) = -c[i] / std::pow(scale, i + 1);
      if (i + 1 < degree) companion(i + 1, i) = 1.0;
    }
    balance(companion);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (int i = 0; i < degree; ++i) roots[i] = es.eigenvalues()(i) * scale;
  }

  auto eval = [&](cplx x) {
    cplx p = coeffs[0], dp = 0.0;
    for (int i = 1; i <= n; ++i) {
      dp = dp * x + p;
      p = p * x + coeffs[i];
    }
    return std::pair{p, dp};
  };
  for (int i = 0; i < degree; ++i) {
    const auto [p, dp] = eval(roots[i]);
    if (dp == 0.0) continue;
    const cplx polished = roots[i] - p / dp;
    if (std::abs(eval(polished).first) <= std::abs(p)) roots[i] = polished;
  }
  // Keep conjugate pairs and real roots exact.
  for (int i = 0; i < degree; ++i) {
    if (std::abs(roots[i].imag()) <= 1e-14 * std::abs(roots[i])) roots[i].imag(0.0);
  }
  return roots;
}

std::array<cplx, 4> solve_quartic(const QuarticCoeffs& qc) {
  if (qc.a4 == 0.0) throw Degenerate("leading quartic coefficient is zero");
  const std::array<double, 5> c{qc.a4, qc.a3, qc.a2, qc.a1, qc.a0};
  const auto r = polynomial_roots(c);
  return {r[0], r[1], r[2], r[3]};
}

cplx EigenSet::lambda(int k) const {
  if (k == 1) return lambda1;
  if (k == 2) return lambda2;
  if (k >= 3 && k <= 6) return longitudinal[k - 3];
  throw std::out_of_range("eigenvalue index must be in 1..6");
}

std::array<cplx, 4> low_freq_expansion(double r, const NormalizedParams& np) {
  const double c2 = np.c * np.c, s2 = np.sigma * np.sigma, b2 = np.b * np.b;
  const double r2 = r * r;
  const double acoustic_damping = np.tau * b2 * s2 / (2.0 * (s2 + c2)) + 0.5 * np.two_nu_eta();
  const double c_hat = std::sqrt(s2 + c2);
  return {
      cplx(-1.0 / np.tau + np.tau * b2 * r2, 0.0),
      cplx(-acoustic_damping * r2, c_hat * r),
      cplx(-acoustic_damping * r2, -c_hat * r),
      cplx(-np.tau * b2 * c2 / (s2 + c2) * r2, 0.0),
  };
}

std::array<cplx, 4> high_freq_expansion(double r, const NormalizedParams& np) {
  const double c2 = np.c * np.c, s2 = np.sigma * np.sigma;
  const double D = np.two_nu_eta();
  const double wave_damping = s2 / (2.0 * D) + 1.0 / (2.0 * np.tau);
  return {
      cplx(-c2 / D, 0.0),
      cplx(-wave_damping, np.b * r),
      cplx(-wave_damping, -np.b * r),
      cplx(-D * r * r + (c2 + s2) / D, 0.0),
  };
}

namespace {

using Perm = std::array<int, 4>;

// Permutation p minimizing sum_i |from[p[i]] - to[i]|.
Perm best_permutation(const std::array<cplx, 4>& from, const std::array<cplx, 4>& to) {
  Perm p{0, 1, 2, 3}, best = p;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < 4; ++i) cost += std::abs(from[p[i]] - to[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

std::array<cplx, 4> permuted(const std::array<cplx, 4>& v, const Perm& p) {
  return {v[p[0]], v[p[1]], v[p[2]], v[p[3]]};
}

bool has_close_pair(const std::array<cplx, 4>& v) {
  double scale = 1.0;
  for (auto x : v) scale = std::max(scale, std::abs(x));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(v[i] - v[j]) < 1e-12 * scale) return true;
  return false;
}

// lambda5 must be the conjugate partner of a non-real lambda4.
void enforce_conjugate_pair(std::array<cplx, 4>& v) {
  if (v[1].imag() == 0.0) return;
  const cplx partner = std::conj(v[1]);
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 4; ++j) {
    if (j == 1) continue;
    const double d = std::abs(v[j] - partner);
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  if (best != 2 && best >= 0 && best_dist <= 1e-12 * std::max(1.0, std::abs(partner))) {
    std::swap(v[2], v[best]);
  }
}

}  // namespace

std::array<cplx, 4> match_to(const std::array<cplx, 4>& roots,
                             const std::array<cplx, 4>& prediction) {
  return permuted(roots, best_permutation(roots, prediction));
}

EigenSet eigen_set(double r, const NormalizedParams& np) {
  EigenSet e;
  e.r = r;
  e.lambda1 = -np.nu * r * r;
  e.lambda2 = -1.0 / np.tau;
  e.longitudinal = match_to(solve_quartic(longitudinal_quartic(r, np)), low_freq_expansion(r, np));
  return e;
}

std::vector<EigenSet> eigen_branches(std::span<const double> r_grid, const NormalizedParams& np) {
  if (r_grid.empty()) throw std::invalid_argument("eigen_branches: empty radial grid");
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > r_grid[i - 1])) {
      throw std::invalid_argument("eigen_branches: radial grid must be increasing");
    }
  }
  std::vector<EigenSet> out;
  out.reserve(r_grid.size());
  out.push_back(eigen_set(r_grid[0], np));
  for (std::size_t i = 1; i < r_grid.size(); ++i) {
    EigenSet e;
    e.r = r_grid[i];
    e.lambda1 = -np.nu * e.r * e.r;
    e.lambda2 = -1.0 / np.tau;
    auto roots = solve_quartic(longitudinal_quartic(e.r, np));
    if (has_close_pair(roots)) {
      e.ambiguous = true;
      std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
      });
      e.longitudinal = roots;
    } else {
      e.longitudinal = match_to(roots, out.back().longitudinal);
      enforce_conjugate_pair(e.longitudinal);
    }
    out.push_back(e);
  }
  return out;
}

ExpansionReport verify_expansions(const NormalizedParams& np, FrequencyBand band,
                                  std::span<const double> radii) {
  if (radii.size() < 2) throw std::invalid_argument("verify_expansions: need at least two radii");
  ExpansionReport report;
  report.band = band;
  report.radii.assign(radii.begin(), radii.end());
  const auto& claimed = band == FrequencyBand::Low ? kLowRemainderOrder : kHighRemainderOrder;
  for (int k = 0; k < 4; ++k) {
    report.branches[k].branch = k + 3;
    report.branches[k].claimed_order = claimed[k];
  }
  for (double r : radii) {
    const auto prediction =
        band == FrequencyBand::Low ? low_freq_expansion(r, np) : high_freq_expansion(r, np);
    const auto roots = match_to(solve_quartic(longitudinal_quartic(r, np)), prediction);
    for (int k = 0; k < 4; ++k) report.branches[k].errors.push_back(std::abs(roots[k] - prediction[k]));
  }
  // Low band: error ~ r^p. High band: error ~ r^-p.
  const double sign = band == FrequencyBand::Low ? 1.0 : -1.0;
  report.pass = true;
  for (auto& br : report.branches) {
    br.pass = true;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
      const double e0 = br.errors[i], e1 = br.errors[i + 1];
      double order;
      if (e0 == 0.0 && e1 == 0.0) {
        order = std::numeric_limits<double>::infinity();
      } else {
        order = sign * std::log(e0 / e1) / std::log(radii[i] / radii[i + 1]);
      }
      br.orders.push_back(order);
      if (!(order >= br.claimed_order - 0.3)) br.pass = false;
    }
    report.pass = report.pass && br.pass;
  }
  return report;
}

SpectralBounds spectral_bounds(std::span<const EigenSet> branches, double r0, double R0) {
  if (!(r0 > 0.0 && r0 < R0)) throw std::invalid_argument("spectral_bounds: need 0 < r0 < R0");
  constexpr double inf = std::numeric_limits<double>::infinity();
  SpectralBounds sb{inf, inf, inf, r0, R0};
  bool low = false, medium = false, high = false;
  for (const auto& e : branches) {
    double slowest = inf;  // min over k of -Re lambda_k
    for (const auto& l : e.longitudinal) slowest = std::min(slowest, -l.real());
    if (e.r > 0.0 && e.r <= r0) {
      sb.beta = std::min(sb.beta, slowest / (e.r * e.r));
      low = true;
    }
    if (e.r >= r0 && e.r <= R0) {
      sb.R2 = std::min(sb.R2, slowest);
      medium = true;
    }
    if (e.r >= R0) {
      sb.R1 = std::min(sb.R1, slowest);
      high = true;
    }
  }
  if (!low || !medium || !high) {
    throw BoundViolation("spectral_bounds: samples do not cover the low, medium and high bands");
  }
  if (!(sb.beta > 0.0) || !(sb.R1 > 0.0) || !(sb.R2 > 0.0)) {
    throw BoundViolation("spectral gap not positive: beta=" + std::to_string(sb.beta) +
                         " R1=" + std::to_string(sb.R1) + " R2=" + std::to_string(sb.R2));
  }
  return sb;
}

}  // namespace nsclab
