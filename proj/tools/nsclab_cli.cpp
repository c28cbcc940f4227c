#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nsclab/acceptance.hpp"
#include "nsclab/config.hpp"
#include "nsclab/errors.hpp"
#include "nsclab/fit.hpp"
#include "nsclab/fouriermodel.hpp"
#include "nsclab/green.hpp"
#include "nsclab/linsim.hpp"
#include "nsclab/nonlinsim.hpp"
#include "nsclab/symbol.hpp"

using namespace nsclab;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  double tau = NAN;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", c.overrides, "Override a config value: section.key=value (repeatable)");
  app->add_option("--tau", c.tau, "Relaxation time, shorthand for --set physical.tau=...");
  app->add_option("--out", c.out, "Output path prefix (default: [experiment] output + command name)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  for (const auto& o : c.overrides) apply_override(cfg, o);
  if (!std::isnan(c.tau)) cfg.physical.tau = c.tau;
  return cfg;
}

std::string prefix(const Common& c, const ExperimentConfig& cfg, const std::string& command) {
  return c.out.empty() ? cfg.experiment.output + "_" + command : c.out;
}

void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Log-log gnuplot script for columns 2.. of a CSV whose first column is time.
std::string gnuplot_script(const std::string& csv, const std::vector<std::string>& columns, const std::string& title) {
  std::ostringstream os;
  os << "# gnuplot script\nset datafile separator ','\nset logscale xy\nset key outside\n"
     << "set xlabel 'time'\nset title '" << title << "'\nset terminal pngcairo size 900,600\n"
     << "set output '" << csv.substr(0, csv.size() - 4) << ".png'\nplot ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << (i ? ", \\\n     " : "") << "'" << csv << "' using 1:" << i + 2 << " skip 1 with lines title '"
       << columns[i] << "'";
  }
  os << "\n";
  return os.str();
}

std::string series_csv(const NormSeries& s, const std::vector<const NormSeries*>& extra = {},
                       const std::vector<std::string>& extra_prefix = {}) {
  std::ostringstream os;
  os.precision(17);
  os << "time";
  for (const auto& c : s.columns) os << ',' << (extra.empty() ? "" : "cattaneo_") << c.request.label();
  for (std::size_t e = 0; e < extra.size(); ++e)
    for (const auto& c : extra[e]->columns) os << ',' << extra_prefix[e] << c.request.label();
  os << '\n';
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    os << s.times[i];
    for (const auto& c : s.columns) os << ',' << c.values[i];
    for (const auto* x : extra)
      for (const auto& c : x->columns) os << ',' << c.values[i];
    os << '\n';
  }
  return os.str();
}

int report_criteria(const std::vector<CriterionResult>& rs) {
  bool ok = true;
  for (const auto& r : rs) {
    std::cout << summary_line(r) << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

json criterion_json(const CriterionResult& r) {
  json j{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"measured", r.measured},
         {"tolerance", r.tolerance}, {"wall_time_s", r.seconds}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

// --- commands --------------------------------------------------------------

int cmd_spectrum(const Common& c, double rmin, double rmax, int n) {
  const auto cfg = resolve(c);
  const auto np = normalize(cfg.physical);
  if (!(rmin > 0.0) || !(rmax > rmin) || n < 2) throw std::invalid_argument("spectrum: need 0 < rmin < rmax, n >= 2");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = rmin * std::pow(rmax / rmin, static_cast<double>(i) / (n - 1));
  const auto br = eigen_branches(grid, np);
  std::ostringstream os;
  os.precision(17);
  os << "r";
  for (int k = 1; k <= 6; ++k) os << ",lambda" << k << "_re,lambda" << k << "_im";
  os << ",ambiguous\n";
  for (const auto& e : br) {
    os << e.r;
    for (int k = 1; k <= 6; ++k) os << ',' << e.lambda(k).real() << ',' << e.lambda(k).imag();
    os << ',' << (e.ambiguous ? 1 : 0) << '\n';
  }
  const auto path = prefix(c, cfg, "spectrum") + ".csv";
  write_file(path, os.str());
  std::cout << "wrote " << path << " (" << n << " radii)\n";
  return 0;
}

int cmd_verify(const Common& c) {
  const auto cfg = resolve(c);
  const auto r = run_criterion(1, cfg);
  json j = criterion_json(r);
  j["config"] = to_json(cfg);
  const auto path = prefix(c, cfg, "verify_expansions") + ".json";
  write_file(path, j.dump(2) + "\n");
  std::cout << "wrote " << path << '\n';
  return report_criteria({r});
}

int cmd_green(const Common& c, const std::vector<double>& xi_in, double t, const std::string& method) {
  const auto cfg = resolve(c);
  const auto np = normalize(cfg.physical);
  Vec3 xi;
  if (xi_in.size() == 1) xi = Vec3(xi_in[0], 0, 0);
  else if (xi_in.size() == 3) xi = Vec3(xi_in[0], xi_in[1], xi_in[2]);
  else throw std::invalid_argument("green: --xi takes one radius or three components");
  const auto G = green(xi, t, np, parse_green_method(method));
  json m = json::array();
  for (int i = 0; i < 8; ++i) {
    json row = json::array();
    for (int j = 0; j < 8; ++j) row.push_back({G.entries(i, j).real(), G.entries(i, j).imag()});
    m.push_back(row);
  }
  json j{{"xi", {xi(0), xi(1), xi(2)}},
         {"t", t},
         {"method", std::string(to_string(G.method))},
         {"ordering", {"n", "w1", "w2", "w3", "phi", "psi1", "psi2", "psi3"}},
         {"entries", m},
         {"config", to_json(cfg)}};
  if (!c.out.empty()) write_file(c.out + ".json", j.dump(2) + "\n");
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_linear_decay(const Common& c) {
  const auto cfg = resolve(c);
  const auto np = normalize(cfg.physical);
  const auto data = make_radial_data(cfg.data);
  const auto times = parse_times(cfg.time.times);
  const auto req = make_requests(cfg.requests);
  const auto s = evolve_series(data, times, req, np);
  const auto pre = prefix(c, cfg, "linear_decay");

  json fits = json::object();
  std::vector<std::string> labels;
  for (const auto& col : s.columns) {
    labels.push_back(col.request.label());
    try {
      const auto f = fit_decay(s.times, col.values, cfg.time.fit_min, cfg.time.fit_max);
      fits[col.request.label()] = {{"slope", f.slope}, {"stderr", f.stderr_slope}, {"intercept", f.intercept},
                                   {"t_min", f.t_min}, {"t_max", f.t_max}, {"n_points", f.n_points}};
      std::cout << col.request.label() << ": slope " << num(f.slope) << " +- " << f.stderr_slope << '\n';
    } catch (const Error& e) {
      fits[col.request.label()] = {{"error", e.what()}};
      std::cout << col.request.label() << ": " << e.what() << '\n';
    }
  }
  write_file(pre + ".csv", series_csv(s));
  write_file(pre + ".json", json{{"fits", fits}, {"config", to_json(cfg)}}.dump(2) + "\n");
  write_file(pre + ".gp", gnuplot_script(pre + ".csv", labels, "norm decay"));
  std::cout << "wrote " << pre << ".csv, .json, .gp\n";
  return 0;
}

int cmd_lower_bound(const Common& c) {
  const auto cfg = resolve(c);
  const auto np = normalize(cfg.physical);
  const auto ex = lower_bound_experiment(np, cfg.data.mu0, cfg.data.r0, cfg.data.R0);
  const auto r = run_criterion(5, cfg, &ex);
  const auto pre = prefix(c, cfg, "lower_bound");
  std::ostringstream os;
  os.precision(17);
  os << "time,compensated_n,compensated_psi\n";
  const auto& n = ex.cattaneo.column("n_k0").values;
  const auto& p = ex.cattaneo.column("psi_k0").values;
  for (std::size_t i = 0; i < ex.cattaneo.times.size(); ++i) {
    const double t = ex.cattaneo.times[i];
    os << t << ',' << std::pow(1 + t, 0.75) * n[i] << ',' << std::pow(1 + t, 1.25) * p[i] << '\n';
  }
  write_file(pre + ".csv", os.str());
  json j = criterion_json(r);
  j["config"] = to_json(cfg);
  write_file(pre + ".json", j.dump(2) + "\n");
  std::cout << "bracket of (1+t)^{3/4} ||n(t)||: [" << num(r.measured["n_k0"]["min"]) << ", "
            << num(r.measured["n_k0"]["max"]) << "]\n";
  return report_criteria({r});
}

int cmd_compare_fourier(const Common& c) {
  const auto cfg = resolve(c);
  const auto np = normalize(cfg.physical);
  const auto ex = lower_bound_experiment(np, cfg.data.mu0, cfg.data.r0, cfg.data.R0);
  const auto r = run_criterion(8, cfg, &ex);
  const auto pre = prefix(c, cfg, "compare_fourier");
  write_file(pre + ".csv", series_csv(ex.cattaneo, {&ex.fourier}, {"fourier_"}));
  json j = criterion_json(r);
  j["config"] = to_json(cfg);
  write_file(pre + ".json", j.dump(2) + "\n");
  std::vector<std::string> labels;
  for (const auto& col : ex.cattaneo.columns) labels.push_back("cattaneo_" + col.request.label());
  for (const auto& col : ex.fourier.columns) labels.push_back("fourier_" + col.request.label());
  write_file(pre + ".gp", gnuplot_script(pre + ".csv", labels, "Cattaneo vs Fourier"));
  std::cout << "wrote " << pre << ".csv, .json, .gp\n";
  return report_criteria({r});
}

int cmd_nonlinear(const Common& c, int snapshot_every) {
  const auto cfg = resolve(c);
  const auto np = normalize(cfg.physical);
  auto nc = make_nonlinear_config(cfg);
  const auto pre = prefix(c, cfg, "nonlinear");
  if (snapshot_every > 0) {
    nc.snapshot_every = snapshot_every;
    nc.snapshot_prefix = pre;
    if (const auto dir = std::filesystem::path(pre).parent_path(); !dir.empty()) std::filesystem::create_directories(dir);
  }
  const auto res = run(nc, np);
  write_file(pre + ".csv", monitor_csv(res.report));
  json j{{"completed", res.completed},
         {"steps", res.report.steps},
         {"dt_min", res.report.dt_min},
         {"dt_max", res.report.dt_max},
         {"dt_mean", res.report.dt_mean},
         {"config", to_json(cfg)}};
  if (!res.error.empty()) j["error"] = res.error;
  write_file(pre + ".json", j.dump(2) + "\n");
  std::cout << "wrote " << pre << ".csv (" << res.report.rows.size() << " rows, " << res.report.steps << " steps)\n";
  if (!res.completed) {
    std::cerr << "run stopped: " << res.error << '\n';
    return 1;
  }
  return 0;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

int cmd_fit(const Common& c, const std::string& csv, const std::string& column, double tmin, double tmax) {
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("fit: cannot open " + csv);
  std::string line;
  std::getline(in, line);
  const auto header = csv_fields(line);
  int tcol = -1, vcol = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "time") tcol = static_cast<int>(i);
    if (header[i] == column) vcol = static_cast<int>(i);
  }
  if (tcol < 0) throw std::runtime_error("fit: no 'time' column in " + csv);
  if (vcol < 0) throw std::runtime_error("fit: no column '" + column + "' in " + csv);
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_fields(line);
    t.push_back(std::stod(f.at(tcol)));
    v.push_back(std::stod(f.at(vcol)));
  }
  const DecayFit fit = (tmin < 0 || tmax < 0) ? fit_decay(t, v) : fit_decay(t, v, tmin, tmax);
  json j{{"column", column}, {"slope", fit.slope}, {"stderr", fit.stderr_slope}, {"intercept", fit.intercept},
         {"t_min", fit.t_min}, {"t_max", fit.t_max}, {"n_points", fit.n_points}};
  if (!c.out.empty()) write_file(c.out + ".json", j.dump(2) + "\n");
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_accept(const Common& c, const std::string& criteria) {
  auto cfg = resolve(c);
  if (!criteria.empty()) cfg.experiment.criteria = criteria;
  const auto ids = parse_criteria(cfg.experiment.criteria);
  const auto rep = run_acceptance_suite(cfg, ids);
  const auto path = prefix(c, cfg, "accept") + ".json";
  write_file(path, rep.to_json().dump(2) + "\n");
  const int code = report_criteria(rep.criteria);
  std::cout << (code == 0 ? "all criteria passed" : "some criteria FAILED") << "; report " << path << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes-Cattaneo numerical laboratory"};
  app.require_subcommand(1);
  Common common;
  int code = 0;

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalue branches on a log grid of radii (CSV)");
  double rmin = 1e-4, rmax = 1e4;
  int nr = 500;
  add_common(spectrum, common);
  spectrum->add_option("--rmin", rmin, "Smallest radius");
  spectrum->add_option("--rmax", rmax, "Largest radius");
  spectrum->add_option("--n", nr, "Number of radii");
  spectrum->callback([&] { code = cmd_spectrum(common, rmin, rmax, nr); });

  auto* verify = app.add_subcommand("verify-expansions", "Convergence orders of the eigenvalue expansions (JSON)");
  add_common(verify, common);
  verify->callback([&] { code = cmd_verify(common); });

  auto* gr = app.add_subcommand("green", "Green matrix at one frequency and time (JSON)");
  std::vector<double> xi{1.0};
  double t = 1.0;
  std::string method = "explicit";
  add_common(gr, common);
  gr->add_option("--xi", xi, "Radius, or three frequency components")->expected(1, 3);
  gr->add_option("--t", t, "Time");
  gr->add_option("--method", method, "explicit, expm or lowfreq");
  gr->callback([&] { code = cmd_green(common, xi, t, method); });

  auto* lin = app.add_subcommand("linear-decay", "Norm series of radial data and fitted slopes (CSV + JSON)");
  add_common(lin, common);
  std::string data_kind, data_file, times, components, ks, band;
  double mu0 = NAN, r0 = NAN, R0 = NAN, ell = NAN;
  auto data_opts = [&](CLI::App* a) {
    a->add_option("--mu0", mu0, "Lower-bound data amplitude");
    a->add_option("--r0", r0, "Lower-bound data inner radius");
    a->add_option("--R0", R0, "Lower-bound data outer radius");
  };
  lin->add_option("--data", data_kind, "lowerbound, gaussian, indicator, file or zero");
  lin->add_option("--file", data_file, "Radial data CSV for --data file");
  data_opts(lin);
  lin->add_option("--times", times, "log:a:b:n, lin:a:b:n or a comma list");
  lin->add_option("--components", components, "Comma list of component sets");
  lin->add_option("--k", ks, "Comma list of derivative orders");
  lin->add_option("--band", band, "full, low or high");
  lin->add_option("--ell", ell, "Also compute negative norms of this order");

  auto data_overrides = [&] {
    if (!data_kind.empty()) common.overrides.push_back("data.kind=" + data_kind);
    if (!data_file.empty()) common.overrides.push_back("data.path=" + data_file);
    if (!std::isnan(mu0)) common.overrides.push_back("data.mu0=" + num(mu0));
    if (!std::isnan(r0)) common.overrides.push_back("data.r0=" + num(r0));
    if (!std::isnan(R0)) common.overrides.push_back("data.R0=" + num(R0));
  };
  lin->callback([&] {
    data_overrides();
    if (!times.empty()) common.overrides.push_back("time.times=" + times);
    if (!components.empty()) common.overrides.push_back("requests.components=" + components);
    if (!ks.empty()) common.overrides.push_back("requests.k=" + ks);
    if (!band.empty()) common.overrides.push_back("requests.band=" + band);
    if (!std::isnan(ell)) common.overrides.push_back("requests.ell=" + num(ell));
    code = cmd_linear_decay(common);
  });

  auto* lb = app.add_subcommand("lower-bound", "Optimality bracket of the compensated norms");
  add_common(lb, common);
  data_opts(lb);
  lb->callback([&] {
    data_overrides();
    code = cmd_lower_bound(common);
  });

  auto* cf = app.add_subcommand("compare-fourier", "Cattaneo vs Fourier-law decay and relaxation limit");
  add_common(cf, common);
  data_opts(cf);
  cf->callback([&] {
    data_overrides();
    code = cmd_compare_fourier(common);
  });

  auto* nl = app.add_subcommand("nonlinear", "Periodic-box nonlinear run with monitors (CSV)");
  add_common(nl, common);
  int grid_n = 0, monitor_every = 0, snapshot_every = 0;
  double box = NAN, amplitude = NAN, tmax = NAN, dt = NAN, cfl = NAN;
  long long seed = -1;
  nl->add_option("--grid", grid_n, "Points per axis (power of two >= 8)");
  nl->add_option("--L", box, "Box scale, domain [0, 2 pi L)^3");
  nl->add_option("--amplitude", amplitude, "Sup bound of the random data");
  nl->add_option("--seed", seed, "Random seed");
  nl->add_option("--tmax", tmax, "Final time");
  auto* dt_opt = nl->add_option("--dt", dt, "Fixed step (largest step with --cfl)");
  nl->add_option("--cfl", cfl, "Adaptive advective CFL number in (0, 0.5]")->excludes(dt_opt);
  nl->add_option("--monitor-every", monitor_every, "Monitor cadence in steps");
  nl->add_option("--snapshot-every", snapshot_every, "Write binary snapshots every this many steps");
  nl->callback([&] {
    if (grid_n) common.overrides.push_back("grid.N=" + std::to_string(grid_n));
    if (!std::isnan(box)) common.overrides.push_back("grid.L=" + num(box));
    if (!std::isnan(amplitude)) common.overrides.push_back("data.amplitude=" + num(amplitude));
    if (seed >= 0) common.overrides.push_back("data.seed=" + std::to_string(seed));
    if (!std::isnan(tmax)) common.overrides.push_back("time.tmax=" + num(tmax));
    if (!std::isnan(dt)) common.overrides.push_back("time.dt=" + num(dt));
    if (!std::isnan(cfl)) common.overrides.push_back("time.cfl=" + num(cfl));
    if (monitor_every) common.overrides.push_back("time.monitor_every=" + std::to_string(monitor_every));
    code = cmd_nonlinear(common, snapshot_every);
  });

  auto* ft = app.add_subcommand("fit", "Decay exponent of one CSV column");
  add_common(ft, common);
  std::string csv, column;
  double tmin = -1, tmax_fit = -1;
  ft->add_option("--csv", csv, "CSV with a 'time' column")->required()->check(CLI::ExistingFile);
  ft->add_option("--column", column, "Column to fit")->required();
  ft->add_option("--tmin", tmin, "Window start");
  ft->add_option("--tmax", tmax_fit, "Window end");
  ft->callback([&] { code = cmd_fit(common, csv, column, tmin, tmax_fit); });

  auto* acc = app.add_subcommand("accept", "Run the acceptance suite");
  add_common(acc, common);
  std::string criteria;
  acc->add_option("--criteria", criteria, "Comma list of criterion ids (default all)");
  acc->callback([&] { code = cmd_accept(common, criteria); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigKeyError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return code;
}
