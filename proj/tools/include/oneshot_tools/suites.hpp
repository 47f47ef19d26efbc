#pragma once

// Randomized verification suites behind `oneshot verify`. Every trial draws
// from a stream keyed by (seed, invariant or state slot, trial), so reports are
// identical across runs with the same options.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "oneshot/maxinfo.hpp"

namespace oneshot::tools {

struct SuiteOptions {
  // One name from suite_names(), or several joined by commas; a joined run
  // shares the per-state cache.
  std::string suite = "all";
  int trials = 200;
  std::uint64_t seed = 42;
  // Empty: single-system invariants draw d in 2..6 per trial and bipartite
  // ones use 2x2, 3x2 and 3x3.
  std::vector<DimPair> dims;
  // Empty: 0.1 and 0.3.
  std::vector<double> eps;
  double eps_prime = 0.0;
  double tol = 1e-7;
  bool timing = true;
  // Directory for counterexample files; empty disables writing.
  std::string counterexample_dir = ".";
  Imax3Config imax3 = [] {
    Imax3Config c;
    c.restarts = 2;
    return c;
  }();
};

struct Tally {
  std::string invariant;
  std::string dims;
  std::optional<double> eps;
  std::optional<double> eps_prime;
  int trials = 0;
  int holds = 0;
  int violated = 0;
  int inconclusive = 0;
  int errors = 0;
  double min_slack = 0.0;
  bool any_slack = false;
  double seconds = 0.0;
  std::vector<std::string> error_samples;
};

struct SuiteResult {
  std::vector<Tally> tallies;
  int holds = 0;
  int violated = 0;
  int inconclusive = 0;
  int errors = 0;
  std::optional<nlohmann::json> counterexample;
  std::string counterexample_path;
};

const std::vector<std::string>& suite_names();

// Throws ParameterError for an unknown suite name.
SuiteResult run_suite(const SuiteOptions& opt);

nlohmann::json tally_to_json(const Tally& t, bool timing);
nlohmann::json report_to_json(const InequalityReport& r);

// Accepts "2x3" or a comma-separated list of them.
std::vector<DimPair> parse_dims(const std::string& text);
std::vector<double> parse_doubles(const std::string& text);
std::string dims_to_string(DimPair d);

}  // namespace oneshot::tools
