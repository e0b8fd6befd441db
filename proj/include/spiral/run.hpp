#pragma once

// Experiment configuration, dispatch and the acceptance suite.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spiral {

/// Every field has a default; from_json rejects unknown keys and wrong types
/// with ErrorCode::Config. An empty `norm` or `A` selects the experiment's
/// default (sup norm and sign:-1 / hemisphere along e_1, except thm3 which
/// uses the Euclidean norm).
struct RunConfig {
  std::string experiment = "thm1";
  int d = 1;
  double c = 1.0;
  double C = 1.0;
  double eps = 0.1;
  std::uint64_t T = 100000;
  std::vector<double> t = {6.0};
  std::string A;
  std::string norm;
  std::uint64_t M = 2000;
  std::uint64_t n = 200;  // sample points for thm1
  std::uint64_t seed = 0;
  int nmax = 7;
  int N_max = 14;
  std::uint64_t q_min = 100;
  std::vector<double> x;  // birkhoff lattice; empty means uniform from the seed
  nlohmann::json x_base = {{"kind", "constant"}, {"a", "1"}};
  std::uint64_t budget = 0;  // 0: SPIRAL_CANDIDATE_BUDGET or 10^8
  int threads = 1;
  std::string out;
  std::string csv;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

const std::vector<std::string>& experiment_ids();

struct RunOutput {
  nlohmann::json report;
  std::string csv;  // empty when the experiment has no trace
};

/// Runs the configured experiment. The report depends only on the config.
RunOutput run(const RunConfig& config);

struct VerifyOptions {
  bool quick = false;  // stop the census at n = 7
  std::uint64_t seed = 0;
  int threads = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  nlohmann::json detail;
  double seconds = 0.0;  // kept out of the JSON report
  double time_limit = 0.0;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;

  bool passed() const;
  /// Deterministic: timings are excluded.
  nlohmann::json to_json() const;
  nlohmann::json timings() const;
};

/// Criteria 1-11, then a second pass compared byte for byte (criterion 12).
VerifyReport verify(const VerifyOptions& options);

}  // namespace spiral
