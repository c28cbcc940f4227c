#pragma once

#include <array>
#include <string>
#include <vector>

namespace nsclab {

/// Fluid constants of the Navier-Stokes-Cattaneo system in consistent units.
struct PhysicalParams {
  double R = 1.0;           // gas constant
  double gamma = 5.0 / 3.0; // adiabatic exponent
  double kappa = 1.0;       // heat conductivity
  double tau = 1.0;         // relaxation time
  double nu_tilde = 1.0;    // shear viscosity
  double eta_tilde = 0.0;   // second viscosity
  double rho_star = 1.0;
  double theta_star = 1.0;

  static PhysicalParams defaults() { return {}; }
};

struct Violation {
  std::string constraint;
  double value;
};

/// Every violated constraint with the offending value; empty means valid.
std::vector<Violation> validate(const PhysicalParams& p);

/// Constants of the perturbation formulation. Immutable once built by normalize().
struct NormalizedParams {
  double c = 0, sigma = 0, nu = 0, eta = 0, a = 0, b = 0;
  double tau = 0;
  PhysicalParams physical;

  double two_nu_eta() const { return 2.0 * nu + eta; }
  double c_hat() const;
  /// Diffusivity of the Fourier-law limit in temperature-perturbation units.
  double kappa_prime() const { return tau * b * b; }
};

/// Throws InvalidParams listing the violations when validate(p) is nonempty.
NormalizedParams normalize(const PhysicalParams& p);

/// Original variables sampled on a set of points.
struct PrimitiveFields {
  std::vector<double> rho;
  std::array<std::vector<double>, 3> u;
  std::vector<double> theta;
  std::array<std::vector<double>, 3> q;
};

/// n = (rho-rho*)/rho*, w = u/c, phi = (theta-theta*)/(sqrt(gamma-1) theta*), psi = q/a.
struct PerturbationFields {
  std::vector<double> n;
  std::array<std::vector<double>, 3> w;
  std::vector<double> phi;
  std::array<std::vector<double>, 3> psi;
};

/// Throws VacuumBreach if rho <= 0 and NegativeTemperature if theta <= 0 anywhere.
PerturbationFields to_perturbation(const PrimitiveFields& f, const NormalizedParams& np);

/// Inverse of to_perturbation. Throws VacuumBreach if 1+n <= 0 and
/// NegativeTemperature if the reconstructed temperature is nonpositive.
PrimitiveFields from_perturbation(const PerturbationFields& f, const NormalizedParams& np);

}  // namespace nsclab
