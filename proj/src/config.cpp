#include "nsclab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nsclab/errors.hpp"

namespace nsclab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  const std::string t = trim(v);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw std::invalid_argument("not a number");
  return out;
}

long long to_int(const std::string& v) {
  const std::string t = trim(v);
  long long out = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw std::invalid_argument("not an integer");
  return out;
}

struct Binding {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<nlohmann::json(const ExperimentConfig&)> get;
};

using Registry = std::map<std::string, std::map<std::string, Binding>>;

template <typename Member>
Binding num(Member member) {
  return {[member](ExperimentConfig& c, const std::string& v) {
            auto& field = member(c);
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_floating_point_v<T>) field = to_double(v);
            else field = static_cast<T>(to_int(v));
          },
          [member](const ExperimentConfig& c) {
            return nlohmann::json(member(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Member>
Binding str(Member member) {
  return {[member](ExperimentConfig& c, const std::string& v) { member(c) = trim(v); },
          [member](const ExperimentConfig& c) { return nlohmann::json(member(const_cast<ExperimentConfig&>(c))); }};
}

const Registry& registry() {
  static const Registry reg = [] {
    Registry r;
    auto& ph = r["physical"];
    ph["R"] = num([](ExperimentConfig& c) -> double& { return c.physical.R; });
    ph["gamma"] = num([](ExperimentConfig& c) -> double& { return c.physical.gamma; });
    ph["kappa"] = num([](ExperimentConfig& c) -> double& { return c.physical.kappa; });
    ph["tau"] = num([](ExperimentConfig& c) -> double& { return c.physical.tau; });
    ph["nu_tilde"] = num([](ExperimentConfig& c) -> double& { return c.physical.nu_tilde; });
    ph["eta_tilde"] = num([](ExperimentConfig& c) -> double& { return c.physical.eta_tilde; });
    ph["rho_star"] = num([](ExperimentConfig& c) -> double& { return c.physical.rho_star; });
    ph["theta_star"] = num([](ExperimentConfig& c) -> double& { return c.physical.theta_star; });

    auto& ex = r["experiment"];
    ex["kind"] = str([](ExperimentConfig& c) -> std::string& { return c.experiment.kind; });
    ex["output"] = str([](ExperimentConfig& c) -> std::string& { return c.experiment.output; });
    ex["criteria"] = str([](ExperimentConfig& c) -> std::string& { return c.experiment.criteria; });

    auto& da = r["data"];
    da["kind"] = str([](ExperimentConfig& c) -> std::string& { return c.data.kind; });
    da["mu0"] = num([](ExperimentConfig& c) -> double& { return c.data.mu0; });
    da["r0"] = num([](ExperimentConfig& c) -> double& { return c.data.r0; });
    da["R0"] = num([](ExperimentConfig& c) -> double& { return c.data.R0; });
    da["amplitudes"] = Binding{
        [](ExperimentConfig& c, const std::string& v) {
          const auto parts = split(v, ',');
          if (parts.size() != 4) throw std::invalid_argument("expected four comma-separated numbers");
          for (int i = 0; i < 4; ++i) c.data.amplitudes[i] = to_double(parts[i]);
        },
        [](const ExperimentConfig& c) { return nlohmann::json(c.data.amplitudes); }};
    da["width"] = num([](ExperimentConfig& c) -> double& { return c.data.width; });
    da["radius"] = num([](ExperimentConfig& c) -> double& { return c.data.radius; });
    da["component"] = str([](ExperimentConfig& c) -> std::string& { return c.data.component; });
    da["path"] = str([](ExperimentConfig& c) -> std::string& { return c.data.path; });
    da["amplitude"] = num([](ExperimentConfig& c) -> double& { return c.data.amplitude; });
    da["seed"] = num([](ExperimentConfig& c) -> std::uint64_t& { return c.data.seed; });
    da["kmax"] = num([](ExperimentConfig& c) -> int& { return c.data.kmax; });

    auto& ti = r["time"];
    ti["times"] = str([](ExperimentConfig& c) -> std::string& { return c.time.times; });
    ti["fit_min"] = num([](ExperimentConfig& c) -> double& { return c.time.fit_min; });
    ti["fit_max"] = num([](ExperimentConfig& c) -> double& { return c.time.fit_max; });
    ti["tmax"] = num([](ExperimentConfig& c) -> double& { return c.time.tmax; });
    ti["dt"] = num([](ExperimentConfig& c) -> double& { return c.time.dt; });
    ti["cfl"] = num([](ExperimentConfig& c) -> double& { return c.time.cfl; });
    ti["monitor_every"] = num([](ExperimentConfig& c) -> int& { return c.time.monitor_every; });

    auto& gr = r["grid"];
    gr["N"] = num([](ExperimentConfig& c) -> int& { return c.grid.N; });
    gr["L"] = num([](ExperimentConfig& c) -> double& { return c.grid.L; });

    auto& rq = r["requests"];
    rq["components"] = str([](ExperimentConfig& c) -> std::string& { return c.requests.components; });
    rq["k"] = str([](ExperimentConfig& c) -> std::string& { return c.requests.k; });
    rq["band"] = str([](ExperimentConfig& c) -> std::string& { return c.requests.band; });
    rq["ell"] = num([](ExperimentConfig& c) -> double& { return c.requests.ell; });
    return r;
  }();
  return reg;
}

void assign(ExperimentConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const auto& reg = registry();
  const auto sec = reg.find(section);
  if (sec == reg.end()) throw ConfigKeyError(section, "", "config: unknown section [" + section + "]");
  const auto it = sec->second.find(key);
  if (it == sec->second.end()) {
    throw ConfigKeyError(section, key, "config: unknown key '" + key + "' in section [" + section + "]");
  }
  try {
    it->second.set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigKeyError(section, key,
                         "config: bad value '" + value + "' for [" + section + "] " + key + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigKeyError("", "", std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigKeyError("", section, "config: key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : body) assign(cfg, section, key, value.data());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigKeyError("", assignment, "config: override must look like section.key=value, got '" + assignment + "'");
  }
  assign(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
         assignment.substr(eq + 1));
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [section, keys] : registry())
    for (const auto& [key, b] : keys) j[section][key] = b.get(cfg);
  return j;
}

std::vector<double> parse_times(const std::string& spec) {
  const auto parts = split(spec, ':');
  std::vector<double> out;
  if (!parts.empty() && (parts[0] == "log" || parts[0] == "lin")) {
    if (parts.size() != 4) throw std::invalid_argument("time grid must be log:a:b:n or lin:a:b:n");
    const double a = to_double(parts[1]), b = to_double(parts[2]);
    const auto n = to_int(parts[3]);
    if (n < 1) throw std::invalid_argument("time grid needs n >= 1");
    if (!(b >= a)) throw std::invalid_argument("time grid needs b >= a");
    if (parts[0] == "log" && !(a > 0.0)) throw std::invalid_argument("log time grid needs a > 0");
    for (long long i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(parts[0] == "log" ? a * std::pow(b / a, s) : a + (b - a) * s);
    }
    return out;
  }
  for (const auto& p : split(spec, ',')) out.push_back(to_double(p));
  if (out.empty()) throw std::invalid_argument("empty time list");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& p : split(s, ',')) out.push_back(static_cast<int>(to_int(p)));
  return out;
}

RadialDataSpec make_radial_data(const DataSection& d) {
  if (d.kind == "lowerbound") return make_lowerbound_data(d.mu0, d.r0, d.R0);
  if (d.kind == "gaussian") return make_gaussian_data(d.amplitudes, d.width);
  if (d.kind == "indicator") return make_indicator_data(d.radius, parse_components(d.component));
  if (d.kind == "file") return load_radial_data(d.path);
  if (d.kind == "zero") return make_zero_data();
  throw ConfigKeyError("data", "kind", "config: unknown data kind '" + d.kind + "'");
}

std::vector<NormRequest> make_requests(const RequestSection& r) {
  std::vector<NormRequest> out;
  const NormBand band = parse_band(r.band);
  const auto ks = parse_int_list(r.k);
  for (const auto& c : split(r.components, ',')) {
    const unsigned set = parse_components(c);
    for (int k : ks) {
      if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
      out.push_back({set, k, band, 0.0});
    }
    if (r.ell > 0.0) out.push_back({set, 0, NormBand::Full, r.ell});
  }
  return out;
}

NonlinearConfig make_nonlinear_config(const ExperimentConfig& cfg) {
  NonlinearConfig nc;
  nc.N = cfg.grid.N;
  nc.L = cfg.grid.L;
  nc.amplitude = cfg.data.amplitude;
  nc.data.kind = DataKind::Random;
  nc.data.seed = cfg.data.seed;
  nc.data.kmax = cfg.data.kmax;
  nc.tmax = cfg.time.tmax;
  nc.dt = cfg.time.dt;
  nc.cfl = cfg.time.cfl;
  nc.monitor_every = cfg.time.monitor_every;
  return nc;
}

}  // namespace nsclab
