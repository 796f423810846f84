#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bladegauge/numerics.hpp"
#include "schema.hpp"

namespace bladegauge::app {

enum class Exit : int { ok = 0, check_failed = 1, usage = 2 };

/// Bad flags, unreadable or invalid config; maps to exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = "<=";  ///< "<=" or "=="
  bool expect_ok = true;        ///< false marks a negative control

  bool ok() const { return relation == "==" ? value == threshold : value <= threshold; }
  /// pass, fail, expected-fail or unexpected-pass.
  std::string status() const;
  bool acceptable() const { return ok() == expect_ok; }
};

struct Outcome {
  std::vector<Check> checks;
  json result = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  json dump;  ///< field dump for output.dump; null when not requested

  Exit exit() const;
};

std::string_view version();

/// Embedded copy of schemas/<name>.schema.json.
const json& schema_for(std::string_view name);
std::vector<std::string> schema_names();

/// Parses a JSON file; UsageError with the byte offset on malformed input.
json load_json_file(const std::string& path);

/// Defaults, then the config file (if any), then flag overrides; the result
/// is validated against the command schema. Violations raise UsageError
/// carrying the JSON pointer of the offending value.
json resolve_config(std::string_view command, const std::string& config_path, const json& overrides);
json defaults_for(std::string_view command);

/// Thresholds after applying the "tolerances" block of a config.
Tolerances tolerances_from(const json& cfg);

Outcome run_verify(const json& cfg);
Outcome run_residuals(const json& cfg);
Outcome run_sigma_flow(const json& cfg);
Outcome run_darboux(const json& cfg);
Outcome run_embedded(const json& cfg);
Outcome run_command(std::string_view command, const json& cfg);

/// Deterministic report: everything but the "run" field depends only on the
/// resolved config.
json make_report(std::string_view command, const json& cfg, const Outcome& out);
/// Adds the "run" field (UTC timestamp, thread count).
void stamp_report(json& report);

std::string to_csv(const Outcome& out);

}  // namespace bladegauge::app
