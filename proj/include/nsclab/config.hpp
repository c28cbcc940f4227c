#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsclab/linsim.hpp"
#include "nsclab/nonlinsim.hpp"
#include "nsclab/params.hpp"

namespace nsclab {

struct ExperimentSection {
  std::string kind = "accept";
  /// Output path prefix for CSV/JSON products.
  std::string output = "nsclab";
  /// Comma list of acceptance criteria, or "all".
  std::string criteria = "all";
};

struct DataSection {
  /// lowerbound | gaussian | indicator | file | zero
  std::string kind = "lowerbound";
  double mu0 = 1.0;
  double r0 = 0.1;
  double R0 = 10.0;
  std::array<double, 4> amplitudes{1.0, 0.0, 0.0, 0.0};
  double width = 1.0;
  double radius = 1.0;
  std::string component = "n";
  std::string path;
  // periodic-box data
  double amplitude = 1e-3;
  std::uint64_t seed = 20240611;
  int kmax = 2;
};

struct TimeSection {
  /// log:a:b:n, lin:a:b:n or a comma list.
  std::string times = "log:1e2:1e5:40";
  double fit_min = 1e2;
  double fit_max = 1e5;
  double tmax = 10.0;
  double dt = 0.05;
  double cfl = 0.0;
  int monitor_every = 1;
};

struct GridSection {
  int N = 16;
  double L = 1.0;
};

struct RequestSection {
  /// Comma list of component sets, each "n", "w", "phi", "psi", "fluid", "all" or "+"-joined.
  std::string components = "fluid,psi";
  /// Comma list of derivative orders.
  std::string k = "0,1,2";
  std::string band = "full";
  /// Adds negative-norm columns of order ell when positive.
  double ell = 0.0;
};

/// Sections [physical], [experiment], [data], [time], [grid], [requests].
struct ExperimentConfig {
  PhysicalParams physical;
  ExperimentSection experiment;
  DataSection data;
  TimeSection time;
  GridSection grid;
  RequestSection requests;
};

/// INI text to config. Missing sections and keys keep their defaults; unknown
/// sections or keys and unparsable values throw ConfigKeyError naming the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies "section.key=value"; same validation as the file reader.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

nlohmann::json to_json(const ExperimentConfig& cfg);

std::vector<double> parse_times(const std::string& spec);
std::vector<int> parse_int_list(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

RadialDataSpec make_radial_data(const DataSection& d);
std::vector<NormRequest> make_requests(const RequestSection& r);
NonlinearConfig make_nonlinear_config(const ExperimentConfig& cfg);

}  // namespace nsclab
