#include "nsclab/linsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nsclab/errors.hpp"
#include "nsclab/green.hpp"
#include "nsclab/symbol.hpp"

namespace nsclab {

namespace {

constexpr double kPi = std::numbers::pi;

double band_weight(NormBand band, const FrequencyBands& b, double r) {
  switch (band) {
    case NormBand::Full: return 1.0;
    case NormBand::Low: {
      const double c = b.chi1(r);
      return c * c;
    }
    case NormBand::High: {
      const double c = b.chi_inf(r);
      return c * c;
    }
  }
  return 1.0;
}

double max_abs_profile(const RadialDataSpec& d) {
  // Coarse scan; exact for the factories that set A0 themselves.
  double m = 0.0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double r = d.support * i / n;
    m = std::max(m, d.longitudinal(r).norm());
  }
  return m;
}

}  // namespace

double FrequencyBands::chi1(double r) const {
  if (r <= r0) return 1.0;
  if (r >= R0) return 0.0;
  const double s = (r - r0) / (R0 - r0);
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

Vec4 RadialDataSpec::longitudinal(double r) const {
  auto at = [r](const Profile& p) { return p ? p(r) : 0.0; };
  return Vec4(cplx(at(n0), 0.0), cplx(0.0, at(w0)), cplx(at(phi0), 0.0), cplx(0.0, at(psi0)));
}

RadialDataSpec make_lowerbound_data(double mu0, double r0, double R0) {
  if (!(mu0 > 0.0)) throw std::invalid_argument("make_lowerbound_data: mu0 must be positive");
  if (!(r0 > 0.0 && r0 < R0)) throw std::invalid_argument("make_lowerbound_data: need 0 < r0 < R0");
  RadialDataSpec d;
  d.kind = "lowerbound";
  const FrequencyBands bands{r0, R0};
  d.n0 = [mu0, bands](double r) { return mu0 * bands.chi1(r); };
  d.breakpoints = {r0};
  d.support = R0;
  d.mu0 = mu0;
  d.r0 = r0;
  d.A0 = mu0;
  return d;
}

RadialDataSpec make_indicator_data(double radius, unsigned comp) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_indicator_data: radius must be positive");
  RadialDataSpec d;
  d.kind = "indicator";
  auto ind = [radius](double r) { return r <= radius ? 1.0 : 0.0; };
  switch (comp) {
    case component::n: d.n0 = ind; break;
    case component::w: d.w0 = ind; break;
    case component::phi: d.phi0 = ind; break;
    case component::psi: d.psi0 = ind; break;
    default: throw std::invalid_argument("make_indicator_data: component must be one of n, w, phi, psi");
  }
  d.support = radius;
  d.A0 = 1.0;
  return d;
}

RadialDataSpec make_gaussian_data(const std::array<double, 4>& amp, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("make_gaussian_data: width must be positive");
  RadialDataSpec d;
  d.kind = "gaussian";
  auto g = [width](double a) -> RadialDataSpec::Profile {
    if (a == 0.0) return {};
    return [a, width](double r) { return a * std::exp(-r * r / (2.0 * width * width)); };
  };
  d.n0 = g(amp[0]);
  d.w0 = g(amp[1]);
  d.phi0 = g(amp[2]);
  d.psi0 = g(amp[3]);
  // exp(-r^2/2w^2) < 1e-22 beyond this radius.
  d.support = width * std::sqrt(2.0 * 50.0);
  d.A0 = std::sqrt(amp[0] * amp[0] + amp[1] * amp[1] + amp[2] * amp[2] + amp[3] * amp[3]);
  d.mu0 = std::abs(amp[0]) * std::exp(-0.5 * 0.01 / (width * width));
  d.r0 = 0.1;
  return d;
}

RadialDataSpec make_zero_data() {
  RadialDataSpec d;
  d.kind = "zero";
  d.support = 1.0;
  return d;
}

RadialDataSpec load_radial_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open radial data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("radial data file '" + path + "' is empty");
  struct Table {
    std::vector<double> r;
    std::array<std::vector<double>, 4> v;
  };
  auto table = std::make_shared<Table>();
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double r;
    std::array<double, 4> row{};
    if (!(ss >> r >> row[0] >> row[1] >> row[2] >> row[3])) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected r,n0,w0,phi0,psi0");
    }
    if (!table->r.empty() && !(r > table->r.back())) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": radii must increase");
    }
    table->r.push_back(r);
    for (int c = 0; c < 4; ++c) table->v[c].push_back(row[c]);
  }
  if (table->r.size() < 2 || table->r.front() != 0.0) {
    throw ConfigError("radial data file '" + path + "' needs at least two rows starting at r = 0");
  }
  RadialDataSpec d;
  d.kind = "file";
  auto interp = [table](int c) -> RadialDataSpec::Profile {
    return [table, c](double r) {
      const auto& rs = table->r;
      if (r < 0.0 || r > rs.back()) return 0.0;
      auto it = std::upper_bound(rs.begin(), rs.end(), r);
      if (it == rs.end()) return table->v[c].back();
      const auto j = static_cast<std::size_t>(it - rs.begin());
      const double s = (r - rs[j - 1]) / (rs[j] - rs[j - 1]);
      return (1.0 - s) * table->v[c][j - 1] + s * table->v[c][j];
    };
  };
  d.n0 = interp(0);
  d.w0 = interp(1);
  d.phi0 = interp(2);
  d.psi0 = interp(3);
  d.breakpoints.assign(table->r.begin() + 1, table->r.end() - 1);
  d.support = table->r.back();
  for (std::size_t i = 0; i < table->r.size(); ++i) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += table->v[c][i] * table->v[c][i];
    d.A0 = std::max(d.A0, std::sqrt(s));
  }
  d.r0 = 0.1;
  d.mu0 = std::abs(d.n0(0.0));
  for (std::size_t i = 0; i < table->r.size() && table->r[i] <= d.r0; ++i) {
    d.mu0 = std::min(d.mu0, std::abs(table->v[0][i]));
  }
  return d;
}

unsigned parse_components(const std::string& s) {
  unsigned set = 0;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    if (tok == "n") set |= component::n;
    else if (tok == "w") set |= component::w;
    else if (tok == "phi") set |= component::phi;
    else if (tok == "psi") set |= component::psi;
    else if (tok == "fluid") set |= component::fluid;
    else if (tok == "all") set |= component::all;
    else throw std::invalid_argument("unknown component '" + tok + "'");
  }
  if (set == 0) throw std::invalid_argument("empty component set");
  return set;
}

std::string components_label(unsigned set) {
  if (set == component::all) return "all";
  if (set == component::fluid) return "fluid";
  std::string out;
  const std::pair<unsigned, const char*> names[] = {
      {component::n, "n"}, {component::w, "w"}, {component::phi, "phi"}, {component::psi, "psi"}};
  for (const auto& [bit, name] : names) {
    if (set & bit) {
      if (!out.empty()) out += "+";
      out += name;
    }
  }
  return out;
}

NormBand parse_band(const std::string& s) {
  if (s == "full") return NormBand::Full;
  if (s == "low") return NormBand::Low;
  if (s == "high") return NormBand::High;
  throw std::invalid_argument("unknown band '" + s + "' (full, low, high)");
}

std::string to_string(NormBand b) {
  switch (b) {
    case NormBand::Full: return "full";
    case NormBand::Low: return "low";
    case NormBand::High: return "high";
  }
  return "full";
}

std::string NormRequest::label() const {
  std::ostringstream os;
  os << components_label(components);
  if (ell > 0.0) {
    os << "_neg" << ell;
  } else {
    os << "_k" << k;
  }
  if (band != NormBand::Full) os << "_" << to_string(band);
  return os.str();
}

DecayEnvelope::DecayEnvelope(const std::function<double(double)>& slowest_rate) {
  const int n = 2400;
  const double lo = -8.0, hi = 6.0;
  r_.resize(n);
  rate_.resize(n);
  for (int i = 0; i < n; ++i) {
    r_[i] = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
    rate_[i] = slowest_rate(r_[i]);
  }
  for (int i = n - 2; i >= 0; --i) rate_[i] = std::min(rate_[i], rate_[i + 1]);
}

double DecayEnvelope::cutoff_radius(double t, double exponent, double support) const {
  if (t <= 0.0 || r_.empty()) return support;
  auto it = std::lower_bound(rate_.begin(), rate_.end(), exponent / t);
  if (it == rate_.end()) return support;
  return std::min(support, r_[static_cast<std::size_t>(it - rate_.begin())]);
}

RadialNorms radial_norms(const ModeMagnitudes& f, std::span<const NormRequest> requests,
                         std::span<const double> breakpoints, const quad::Options& qo,
                         const FrequencyBands& bands) {
  const int m = static_cast<int>(requests.size());
  for (const auto& q : requests) {
    if (q.ell > 0.0) throw std::invalid_argument("radial_norms: negative-order request");
    if (q.k < 0) throw std::invalid_argument("radial_norms: derivative order must be nonnegative");
  }
  RadialNorms out;
  out.values.assign(m, 0.0);
  out.errors.assign(m, 0.0);
  if (m == 0) return out;

  const quad::VectorIntegrand g = [&](double r, Eigen::Ref<Eigen::VectorXd> v) {
    const auto parts = f(r);
    const double base = 4.0 * kPi * r * r;
    for (int j = 0; j < m; ++j) {
      const auto& q = requests[j];
      double s = 0.0;
      for (int c = 0; c < 4; ++c) {
        if (q.components & (1u << c)) s += parts[c];
      }
      v(j) = s == 0.0 ? 0.0 : base * std::pow(r, 2 * q.k) * band_weight(q.band, bands, r) * s;
    }
  };
  out.quadrature = quad::integrate(g, m, breakpoints, qo);
  for (int j = 0; j < m; ++j) {
    const double v = std::max(0.0, out.quadrature.value(j));
    out.values[j] = std::sqrt(v);
    out.errors[j] = v > 0.0 ? out.quadrature.error(j) / (2.0 * out.values[j]) : 0.0;
  }
  return out;
}

RadialEvolution::RadialEvolution(RadialDataSpec data, const NormalizedParams& np, LinsimOptions opts)
    : data_(std::move(data)), np_(np), opts_(opts) {
  if (!(data_.support > 0.0) || !std::isfinite(data_.support)) {
    throw std::invalid_argument("RadialEvolution: data support must be positive and finite");
  }
  if (!(data_.A0 > 0.0)) data_.A0 = max_abs_profile(data_);
  envelope_ = DecayEnvelope([this](double r) {
    const EigenSet e = eigen_set(r, np_);
    double rate = std::min(-e.lambda1, -e.lambda2);
    for (const auto& l : e.longitudinal) rate = std::min(rate, -l.real());
    return rate;
  });
  wave_speed_ = std::max(np_.c_hat(), np_.b);
}

Vec4 RadialEvolution::longitudinal(double r, double t) const {
  const Vec4 u0 = data_.longitudinal(r);
  if (u0.isZero(0.0)) return u0;
  return LongitudinalPropagator(r, np_).apply(t, u0);
}

std::array<double, 4> RadialEvolution::magnitudes(double r, double t) const {
  const Vec4 u = longitudinal(r, t);
  const double wp = data_.transverse_w(r) * std::exp(-np_.nu * r * r * t);
  const double pp = data_.transverse_psi(r) * std::exp(-t / np_.tau);
  return {std::norm(u(0)), std::norm(u(1)) + wp * wp, std::norm(u(2)), std::norm(u(3)) + pp * pp};
}

double RadialEvolution::squared_magnitude(double r, double t, unsigned comps) const {
  const auto parts = magnitudes(r, t);
  double s = 0.0;
  for (int c = 0; c < 4; ++c) {
    if (comps & (1u << c)) s += parts[c];
  }
  return s;
}

double RadialEvolution::effective_radius(double t) const {
  return envelope_.cutoff_radius(t, opts_.decay_cutoff, data_.support);
}

double RadialEvolution::oscillation_width(double t) const {
  if (t <= 0.0) return std::numeric_limits<double>::infinity();
  return kPi / (wave_speed_ * t);
}

std::vector<double> RadialEvolution::breakpoints(double t, bool with_bands) const {
  const double end = effective_radius(t);
  std::vector<double> bp{0.0};
  for (double b : data_.breakpoints) {
    if (b > 0.0 && b < end) bp.push_back(b);
  }
  if (with_bands) {
    for (double b : {opts_.bands.r0, opts_.bands.R0}) {
      if (b > 0.0 && b < end) bp.push_back(b);
    }
  }
  bp.push_back(end);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

RadialEvolution::Norms RadialEvolution::norms(double t, std::span<const NormRequest> requests) const {
  bool bands = false;
  int kmax = 0;
  for (const auto& q : requests) {
    bands = bands || q.band != NormBand::Full;
    kmax = std::max(kmax, q.k);
  }
  const auto bp = breakpoints(t, bands);
  quad::Options qo;
  qo.rel_tol = opts_.rel_tol;
  qo.max_panels = opts_.max_panels;
  qo.max_width = oscillation_width(t);
  // Floor at roundoff level of the data scale, so components that vanish
  // analytically do not drive refinement on noise.
  qo.abs_tol = 1e-26 * data_.A0 * data_.A0 * std::pow(std::max(1.0, bp.back()), 3 + 2 * kmax);
  return radial_norms([&](double r) { return magnitudes(r, t); }, requests, bp, qo, opts_.bands);
}

double RadialEvolution::sobolev_norm(double t, unsigned comps, int k, NormBand band) const {
  const NormRequest q{comps, k, band, 0.0};
  return norms(t, std::span<const NormRequest>(&q, 1)).values[0];
}

double RadialEvolution::negative_norm(double t, double ell, unsigned comps) const {
  if (!(ell > 0.0)) throw std::invalid_argument("negative_norm: ell must be positive");
  const auto bp = breakpoints(t, false);
  const double alpha = 2.0 - 2.0 * ell;

  // Local power of |U|^2 at the origin.
  const double r1 = 1e-7 * bp[1], r2 = 1e-6 * bp[1];
  const double g1 = squared_magnitude(r1, t, comps), g2 = squared_magnitude(r2, t, comps);
  double p = 0.0;
  bool vanishing = g1 == 0.0 && g2 == 0.0;
  if (!vanishing) {
    p = g1 > 0.0 ? std::log(g2 / g1) / std::log(r2 / r1) : 2.0;
    p = std::max(0.0, std::round(p * 1e3) / 1e3);
    if (alpha + p <= -1.0 + 1e-6) {
      throw DivergentIntegral("negative_norm: r^(" + std::to_string(alpha) + ") |U|^2 ~ r^(" +
                              std::to_string(alpha + p) + ") is not integrable at r = 0");
    }
  }

  const auto integrand = [&](double r) {
    const double s = squared_magnitude(r, t, comps);
    return s == 0.0 ? 0.0 : 4.0 * kPi * std::pow(r, alpha) * s;
  };
  quad::Options qo;
  qo.rel_tol = opts_.rel_tol;
  qo.max_panels = opts_.max_panels;
  qo.max_width = oscillation_width(t);
  qo.abs_tol = 1e-26 * data_.A0 * data_.A0;

  double total = 0.0;
  std::vector<double> outer(bp.begin() + 1, bp.end());
  const double beta = alpha + p;
  if (!vanishing && beta < 0.0) {
    // r = r_s u^q flattens r^beta on the first panel.
    const double rs = bp[1], q = 1.0 / (beta + 1.0);
    const auto sub = [&](double u) {
      if (u <= 0.0) return 0.0;
      const double r = rs * std::pow(u, q);
      return integrand(r) * rs * q * std::pow(u, q - 1.0);
    };
    quad::Options qi = qo;
    qi.max_width = std::numeric_limits<double>::infinity();
    const std::array<double, 2> unit{0.0, 1.0};
    total += quad::integrate(sub, unit, qi).first;
  } else {
    outer.insert(outer.begin(), 0.0);
  }
  if (outer.size() >= 2) total += quad::integrate(integrand, outer, qo).first;
  return std::sqrt(std::max(0.0, total));
}

double sobolev_norm(const RadialDataSpec& data, double t, unsigned comps, int k, NormBand band,
                    const NormalizedParams& np, const LinsimOptions& opts) {
  return RadialEvolution(data, np, opts).sobolev_norm(t, comps, k, band);
}

double negative_norm(const RadialDataSpec& data, double t, double ell, unsigned comps,
                     const NormalizedParams& np, const LinsimOptions& opts) {
  return RadialEvolution(data, np, opts).negative_norm(t, ell, comps);
}

const NormColumn& NormSeries::column(const std::string& label) const {
  for (const auto& c : columns) {
    if (c.request.label() == label) return c;
  }
  throw std::out_of_range("NormSeries: no column '" + label + "'");
}

NormSeries evolve_series(const RadialDataSpec& data, std::span<const double> times,
                         std::span<const NormRequest> requests, const NormalizedParams& np,
                         int diagnostics_s, const LinsimOptions& opts) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw std::invalid_argument("evolve_series: times must be nonnegative");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("evolve_series: times must be increasing");
    }
  }
  const RadialEvolution ev(data, np, opts);

  std::vector<NormRequest> positive;
  std::vector<std::size_t> positive_col, negative_col;
  NormSeries out;
  out.times.assign(times.begin(), times.end());
  out.diagnostics_s = diagnostics_s;
  for (std::size_t j = 0; j < requests.size(); ++j) {
    out.columns.push_back({requests[j], {}, {}});
    if (requests[j].ell > 0.0) {
      negative_col.push_back(j);
    } else {
      positive.push_back(requests[j]);
      positive_col.push_back(j);
    }
  }
  const std::size_t diag_start = positive.size();
  for (int j = 0; j <= diagnostics_s; ++j) positive.push_back({component::all, j, NormBand::Full, 0.0});
  if (diagnostics_s >= 0) {
    out.grad_norms.assign(diagnostics_s + 1, {});
    out.energy.assign(diagnostics_s + 1, {});
  }

  double sup = 0.0;
  for (const double t : times) {
    const auto res = ev.norms(t, positive);
    for (std::size_t j = 0; j < positive_col.size(); ++j) {
      out.columns[positive_col[j]].values.push_back(res.values[j]);
      out.columns[positive_col[j]].errors.push_back(res.errors[j]);
    }
    for (const std::size_t j : negative_col) {
      const auto& q = requests[j];
      out.columns[j].values.push_back(ev.negative_norm(t, q.ell, q.components));
      out.columns[j].errors.push_back(0.0);
    }
    if (diagnostics_s >= 0) {
      for (int j = 0; j <= diagnostics_s; ++j) out.grad_norms[j].push_back(res.values[diag_start + j]);
      const std::size_t i = out.grad_norms[0].size() - 1;
      for (int k = 0; k <= diagnostics_s; ++k) {
        double e = 0.0;
        for (int j = k; j <= diagnostics_s; ++j) e += out.grad_norms[j][i] * out.grad_norms[j][i];
        out.energy[k].push_back(e);
      }
      sup = std::max(sup, std::pow(1.0 + t, 0.75) * std::sqrt(out.energy[0][i]));
      out.sup_weighted.push_back(sup);
    }
  }
  return out;
}

double ReconstructionResult::relative() const {
  if (psi_norm > 0.0) return discrepancy / psi_norm;
  return discrepancy == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

cplx reconstruct_psi(const RadialEvolution& ev, double r, double t) {
  const auto& np = ev.params();
  const Vec4 u0 = ev.data().longitudinal(r);
  const cplx psi0 = u0(3);
  if (t == 0.0) return psi0;
  const cplx damped = std::exp(-t / np.tau) * psi0;
  if (u0.isZero(0.0) || r == 0.0) return damped;

  const LongitudinalPropagator prop(r, np);
  const cplx ir = kI * r;
  const quad::VectorIntegrand f = [&](double s, Eigen::Ref<Eigen::VectorXd> v) {
    const cplx val = std::exp(-(t - s) / np.tau) * ir * prop.apply(s, u0)(2);
    v(0) = val.real();
    v(1) = val.imag();
  };
  double freq = 0.0;
  for (const auto& l : prop.eigs().longitudinal) freq = std::max(freq, std::abs(l.imag()));
  quad::Options qo;
  qo.rel_tol = 1e-13;
  qo.abs_tol = 1e-15 * r * std::max(np.tau, 1.0) * u0.norm();
  qo.max_width = freq > 0.0 ? kPi / freq : std::numeric_limits<double>::infinity();
  const std::array<double, 2> bp{0.0, t};
  const auto res = quad::integrate(f, 2, bp, qo);
  return damped - np.b * cplx(res.value(0), res.value(1));
}

ReconstructionResult duhamel_reconstruct_psi(const RadialDataSpec& data, double t,
                                             const NormalizedParams& np, const LinsimOptions& opts) {
  if (!(t >= 0.0)) throw std::invalid_argument("duhamel_reconstruct_psi: t must be nonnegative");
  const RadialEvolution ev(data, np, opts);
  const std::array<NormRequest, 2> reqs{NormRequest{component::psi, 0, NormBand::Full, 0.0},
                                        NormRequest{component::all, 0, NormBand::Full, 0.0}};
  const auto base = ev.norms(t, reqs);

  const quad::VectorIntegrand f = [&](double r, Eigen::Ref<Eigen::VectorXd> v) {
    const cplx direct = ev.longitudinal(r, t)(3);
    const cplx rec = reconstruct_psi(ev, r, t);
    const cplx naive = std::exp(-t / np.tau) * data.longitudinal(r)(3);
    const double w = 4.0 * kPi * r * r;
    v(0) = w * std::norm(rec - direct);
    v(1) = w * std::norm(naive - direct);
  };
  const Eigen::VectorXd d = quad::integrate_on(base.quadrature.panels, f, 2);
  ReconstructionResult out;
  out.t = t;
  out.psi_norm = base.values[0];
  out.discrepancy = std::sqrt(std::max(0.0, d(0)));
  out.naive_discrepancy = std::sqrt(std::max(0.0, d(1)));
  return out;
}

double acoustic_damping_rate(const NormalizedParams& np) {
  const double c2 = np.c * np.c, s2 = np.sigma * np.sigma;
  return np.tau * np.b * np.b * s2 / (2.0 * (s2 + c2)) + 0.5 * np.two_nu_eta();
}

double thermal_diffusion_rate(const NormalizedParams& np) {
  const double c2 = np.c * np.c, s2 = np.sigma * np.sigma;
  return np.tau * np.b * np.b * c2 / (s2 + c2);
}

double z1_lower_integral(double t, double mu0, const NormalizedParams& np, double r0) {
  if (!(t > 0.0)) throw std::invalid_argument("z1_lower_integral: t must be positive");
  const double alpha = acoustic_damping_rate(np) + thermal_diffusion_rate(np);
  const double ch = np.c_hat(), st = std::sqrt(t);
  // exp(-alpha m^2) m^2 < 1e-22 beyond sqrt(50/alpha) + a margin.
  const double upper = std::min(r0 * st, std::sqrt(52.0 / alpha));
  const auto f = [&](double m) {
    const double c = 1.0 + std::cos(ch * m * st);
    return std::exp(-alpha * m * m) * c * c * m * m;
  };
  quad::Options qo;
  qo.rel_tol = 1e-12;
  qo.max_width = kPi / (ch * st);
  const std::array<double, 2> bp{0.0, upper};
  const double integral = quad::integrate(f, bp, qo).first;
  return 4.0 * kPi * mu0 * mu0 * std::pow(t, -1.5) * integral;
}

double z1_asymptotic_constant(double mu0, const NormalizedParams& np) {
  const double alpha = acoustic_damping_rate(np) + thermal_diffusion_rate(np);
  return 4.0 * kPi * mu0 * mu0 * 1.5 * std::sqrt(kPi) / (4.0 * std::pow(alpha, 1.5));
}

}  // namespace nsclab
