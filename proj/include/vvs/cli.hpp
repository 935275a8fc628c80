// Command-line front end: bound, steer, sweep, dynamic, tomo and replay.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vvs::cli {

/// Invalid user input; the CLI exits with status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;               // bound | steer | sweep | dynamic | tomo
  int n = 3;
  std::string encoding = "vortex";   // vortex | polarization
  std::optional<double> fidelity;    // singlet fidelity; wins over werner_v when set
  double werner_v = 1.0;
  double dephasing = 0.0;
  double efficiency = 0.45;          // Bob-side, the xi proxy
  double alice_efficiency = 1.0;
  double theta_deg = 0.0;
  std::string thetas = "0:90:15";    // degrees
  std::string xi = "0.34:1:0.01";
  std::string dynamic_mode = "per-trial";  // per-trial | per-setting
  std::string constraint = "average";      // average | per-setting
  std::string settings = "standard";       // standard | minimal (tomo)
  std::uint64_t trials = 2000000;
  std::uint64_t counts = 100000;           // tomo coincidences per basis pair
  std::optional<std::uint64_t> seed;
  std::string out;                         // empty: stdout, no sidecar
  std::string format = "csv";              // csv | json

  /// Werner visibility after resolving fidelity.
  double resolved_v() const;
  /// Throws ValidationError on any out-of-range field.
  void validate() const;
  nlohmann::json to_json() const;
  /// Unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
};

/// Parses "a:b:step" (inclusive, end snapped), "v1,v2,..." or a single value.
std::vector<double> parse_grid(const std::string& text);

/// 12 significant digits.
std::string format_number(double v);

/// Renders the output file for a resolved configuration.
std::string render(const RunConfig& cfg);

/// Renders, writes `out` atomically and writes the `<out>.config.json` sidecar.
void execute(const RunConfig& cfg);

/// Sidecar path for an output path.
std::string sidecar_path(const std::string& out);

/// Full CLI; returns the process exit status (0 ok, 2 validation, 1 runtime).
int run(int argc, char** argv);

}  // namespace vvs::cli
