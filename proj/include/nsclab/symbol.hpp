#pragma once

#include <array>
#include <span>
#include <vector>

#include "nsclab/params.hpp"
#include "nsclab/types.hpp"

namespace nsclab {

/// Fourier symbol B(xi) of the linearized operator; solutions evolve as exp(-B t).
struct SymbolMatrix {
  Mat8 entries;
  Vec3 xi;
};

SymbolMatrix build_symbol(const Vec3& xi, const NormalizedParams& np);

/// Longitudinal 4x4 block of B at xi = r e, in the ordering (n, w.e, phi, psi.e).
Mat4 longitudinal_block(double r, const NormalizedParams& np);

/// a4 l^4 + a3 l^3 + a2 l^2 + a1 l + a0, the characteristic polynomial of the
/// longitudinal block (up to the factor tau).
struct QuarticCoeffs {
  double a4 = 0, a3 = 0, a2 = 0, a1 = 0, a0 = 0;

  cplx operator()(cplx x) const { return (((a4 * x + a3) * x + a2) * x + a1) * x + a0; }
  cplx derivative(cplx x) const { return ((4.0 * a4 * x + 3.0 * a3) * x + 2.0 * a2) * x + a1; }
  double max_abs() const;
};

QuarticCoeffs longitudinal_quartic(double r, const NormalizedParams& np);

/// Roots of coeffs[0] x^n + ... + coeffs[n] from the balanced companion matrix,
/// one Newton step each, exact zero roots deflated. Throws Degenerate if coeffs[0] == 0.
std::vector<cplx> polynomial_roots(std::span<const double> coeffs);

/// Roots from the eigenvalues of the scaled companion matrix, followed by one
/// Newton step per root. Complex roots come in exact conjugate pairs.
/// Throws Degenerate when a4 == 0.
std::array<cplx, 4> solve_quartic(const QuarticCoeffs& qc);

/// The six eigenvalue branches of -B at one frequency magnitude.
/// lambda1 = -nu r^2 and lambda2 = -1/tau are double; slot i of `longitudinal`
/// holds lambda_{3+i}.
struct EigenSet {
  double r = 0;
  double lambda1 = 0;
  double lambda2 = 0;
  std::array<cplx, 4> longitudinal{};
  bool ambiguous = false;

  /// k in 1..6
  cplx lambda(int k) const;
};

/// Single-radius eigen set with the quartic roots labelled by matching the
/// low-frequency expansion.
EigenSet eigen_set(double r, const NormalizedParams& np);

/// Eigen sets along an increasing grid. Labels are seeded from the
/// low-frequency expansion at the first sample and continued by the
/// permutation of minimal total displacement. Samples where two roots come
/// within 1e-12 are flagged `ambiguous` and fall back to (Re, Im) order.
std::vector<EigenSet> eigen_branches(std::span<const double> r_grid, const NormalizedParams& np);

/// Truncated expansions of lambda3..lambda6.
std::array<cplx, 4> low_freq_expansion(double r, const NormalizedParams& np);
std::array<cplx, 4> high_freq_expansion(double r, const NormalizedParams& np);

/// Remainder orders of the expansions: O(r^p) in the low band, O(r^-p) in the high band.
inline constexpr std::array<double, 4> kLowRemainderOrder{4, 3, 3, 4};
inline constexpr std::array<double, 4> kHighRemainderOrder{2, 1, 1, 1};

/// Permutation of `roots` closest (in total distance) to `prediction`.
std::array<cplx, 4> match_to(const std::array<cplx, 4>& roots,
                             const std::array<cplx, 4>& prediction);

enum class FrequencyBand { Low, High };

struct BranchConvergence {
  int branch = 0;  // 3..6
  double claimed_order = 0;
  std::vector<double> errors;
  std::vector<double> orders;
  bool pass = false;
};

struct ExpansionReport {
  FrequencyBand band = FrequencyBand::Low;
  std::vector<double> radii;
  std::array<BranchConvergence, 4> branches;
  bool pass = false;
};

/// Empirical convergence orders of (root - expansion) between consecutive
/// radii. A branch passes when every order is >= claimed - 0.3.
ExpansionReport verify_expansions(const NormalizedParams& np, FrequencyBand band,
                                  std::span<const double> radii);

struct SpectralBounds {
  double beta = 0;  // low band: Re lambda_k <= -beta r^2
  double R1 = 0;    // high band: Re lambda_k <= -R1
  double R2 = 0;    // medium band: Re lambda_k <= -R2
  double r0 = 0;
  double R0 = 0;
};

/// Gaps of lambda3..lambda6 over the samples of each band. Throws
/// BoundViolation if a band has no samples or a gap is not positive.
SpectralBounds spectral_bounds(std::span<const EigenSet> branches, double r0, double R0);

}  // namespace nsclab
