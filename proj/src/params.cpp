#include "nsclab/params.hpp"

#include <cmath>
#include <sstream>

#include "nsclab/errors.hpp"

namespace nsclab {

std::vector<Violation> validate(const PhysicalParams& p) {
  std::vector<Violation> out;
  auto require_positive = [&](const char* name, double v) {
    if (!(v > 0.0)) out.push_back({std::string(name) + " > 0", v});
  };
  require_positive("R", p.R);
  if (!(p.gamma > 1.0)) out.push_back({"gamma > 1", p.gamma});
  require_positive("kappa", p.kappa);
  require_positive("tau", p.tau);
  require_positive("nu_tilde", p.nu_tilde);
  const double bulk = p.eta_tilde + 2.0 / 3.0 * p.nu_tilde;
  if (!(bulk >= 0.0)) out.push_back({"eta_tilde+(2/3)nu_tilde >= 0", bulk});
  require_positive("rho_star", p.rho_star);
  require_positive("theta_star", p.theta_star);
  return out;
}

double NormalizedParams::c_hat() const { return std::sqrt(c * c + sigma * sigma); }

NormalizedParams normalize(const PhysicalParams& p) {
  if (auto v = validate(p); !v.empty()) {
    std::ostringstream msg;
    msg << "invalid physical parameters:";
    for (const auto& x : v) msg << " [" << x.constraint << ", got " << x.value << "]";
    throw InvalidParams(msg.str());
  }
  NormalizedParams np;
  np.physical = p;
  np.tau = p.tau;
  np.c = std::sqrt(p.R * p.theta_star);
  np.sigma = std::sqrt((p.gamma - 1.0) * p.R * p.theta_star);
  np.nu = p.nu_tilde / p.rho_star;
  np.eta = p.eta_tilde / p.rho_star;
  np.a = std::sqrt(p.kappa * p.rho_star * p.R * p.theta_star * p.theta_star / p.tau);
  np.b = std::sqrt(p.kappa * (p.gamma - 1.0) / (p.tau * p.rho_star * p.R));
  return np;
}

namespace {

void check_sizes(std::size_t n, std::initializer_list<std::size_t> others) {
  for (auto m : others)
    if (m != n) throw std::invalid_argument("field arrays must have equal length");
}

}  // namespace

PerturbationFields to_perturbation(const PrimitiveFields& f, const NormalizedParams& np) {
  const auto& p = np.physical;
  const std::size_t n = f.rho.size();
  check_sizes(n, {f.theta.size(), f.u[0].size(), f.u[1].size(), f.u[2].size(), f.q[0].size(),
                  f.q[1].size(), f.q[2].size()});
  const double temp_scale = std::sqrt(p.gamma - 1.0) * p.theta_star;

  PerturbationFields out;
  out.n.resize(n);
  out.phi.resize(n);
  for (int d = 0; d < 3; ++d) {
    out.w[d].resize(n);
    out.psi[d].resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f.rho[i] > 0.0)) {
      throw VacuumBreach("density " + std::to_string(f.rho[i]) + " at index " + std::to_string(i));
    }
    if (!(f.theta[i] > 0.0)) {
      throw NegativeTemperature("temperature " + std::to_string(f.theta[i]) + " at index " +
                                std::to_string(i));
    }
    out.n[i] = (f.rho[i] - p.rho_star) / p.rho_star;
    out.phi[i] = (f.theta[i] - p.theta_star) / temp_scale;
    for (int d = 0; d < 3; ++d) {
      out.w[d][i] = f.u[d][i] / np.c;
      out.psi[d][i] = f.q[d][i] / np.a;
    }
  }
  return out;
}

PrimitiveFields from_perturbation(const PerturbationFields& f, const NormalizedParams& np) {
  const auto& p = np.physical;
  const std::size_t n = f.n.size();
  check_sizes(n, {f.phi.size(), f.w[0].size(), f.w[1].size(), f.w[2].size(), f.psi[0].size(),
                  f.psi[1].size(), f.psi[2].size()});
  const double temp_scale = std::sqrt(p.gamma - 1.0) * p.theta_star;

  PrimitiveFields out;
  out.rho.resize(n);
  out.theta.resize(n);
  for (int d = 0; d < 3; ++d) {
    out.u[d].resize(n);
    out.q[d].resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(1.0 + f.n[i] > 0.0)) {
      throw VacuumBreach("1+n = " + std::to_string(1.0 + f.n[i]) + " at index " +
                         std::to_string(i));
    }
    out.rho[i] = p.rho_star * (1.0 + f.n[i]);
    out.theta[i] = p.theta_star + temp_scale * f.phi[i];
    if (!(out.theta[i] > 0.0)) {
      throw NegativeTemperature("temperature " + std::to_string(out.theta[i]) + " at index " +
                                std::to_string(i));
    }
    for (int d = 0; d < 3; ++d) {
      out.u[d][i] = np.c * f.w[d][i];
      out.q[d][i] = np.a * f.psi[d][i];
    }
  }
  return out;
}

}  // namespace nsclab
