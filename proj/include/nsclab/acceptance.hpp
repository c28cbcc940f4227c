#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsclab/config.hpp"

namespace nsclab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Measured values, one key per quantity.
  nlohmann::json measured = nlohmann::json::object();
  std::string tolerance;
  /// Short human-readable digest of the measurement.
  std::string summary;
  double seconds = 0;
  /// Set when the criterion threw instead of producing a measurement.
  std::string error;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  nlohmann::json config;
  bool pass() const;
  nlohmann::json to_json() const;
};

inline constexpr int kCriteria = 10;


/// Runs the selected criteria (all when empty) in order.
AcceptanceReport run_acceptance_suite(const ExperimentConfig& cfg, std::span<const int> which = {});

/// "all" (every id) or a comma list of ids in 1..10.
std::vector<int> parse_criteria(const std::string& s);

/// One line: "[PASS] 4 upper decay rates (2.9 s): ...".
std::string summary_line(const CriterionResult& r);

/// Lower-bound data on 40 log times in [1e2, 1e5] under both heat-conduction laws.
struct DecayExperiment {
  /// fluid and psi at k = 0, 1, 2; n at k = 0.
  NormSeries cattaneo;
  /// fluid at k = 0, 1, 2; psi_F at k = 0.
  NormSeries fourier;
  /// Decay fits over [1e2, 1e5] keyed by column label.
  nlohmann::json fits = nlohmann::json::object();
  nlohmann::json fourier_fits = nlohmann::json::object();
};

DecayExperiment lower_bound_experiment(const NormalizedParams& np, double mu0 = 1.0, double r0 = 0.1,
                                       double R0 = 10.0);

/// Runs one criterion with the physical parameters of cfg; criteria 4, 5 and 8
/// use the [data] mu0, r0, R0 and reuse `shared` when given. Failures and thrown
/// errors are recorded in the result. Invalid physical parameters throw
/// InvalidParams before anything runs.
CriterionResult run_criterion(int id, const ExperimentConfig& cfg, const DecayExperiment* shared = nullptr);

}  // namespace nsclab
