#pragma once

#include <cstdint>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace foarith {

struct VerificationReport {
  std::string suite;
  // Effective parameters, defaults filled in.
  nlohmann::json params = nlohmann::json::object();
  uint64_t seed = 0;
  uint64_t checked = 0;
  // Instances that hit the evaluation budget; never counted as checked.
  uint64_t skipped = 0;
  std::vector<nlohmann::json> mismatches;
  nlohmann::json summary = nlohmann::json::object();
  double wall_time_s = 0;

  bool pass() const { return mismatches.empty(); }
  nlohmann::json to_json(bool with_time = true) const;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteInfo {
  std::string name;
  std::string description;
  // Parameter name -> default.
  nlohmann::json defaults;
};

const std::vector<SuiteInfo>& suites();

// Throws UsageError for an unknown suite or parameter. Every suite also
// takes timeout_ms, the per-instance evaluation deadline (0: FOARITH_TIMEOUT_S).
// Instances over the deadline are reported as skipped.
VerificationReport run_suite(const std::string& name, const nlohmann::json& params, uint64_t seed);

// Worker threads for suite instances: FOARITH_THREADS, else the hardware count.
unsigned suite_threads();

}  // namespace foarith
