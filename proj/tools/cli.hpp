#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdarp/dynamics.hpp"
#include "qdarp/ensemble.hpp"
#include "qdarp/pulse.hpp"
#include "qdarp/sweep.hpp"

namespace qdarp::cli {

enum class Command { Evolve, Dressed, Scan, Ensemble, Sweep, Thresholds };

std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegration = 3;
inline constexpr int kExitNotFound = 4;

/// Bad key, bad value or inconsistent configuration (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key -> value text, as read from flags or a config file.
using KeyValues = std::map<std::string, std::string>;

/// Keys accepted by `command`, in canonical order.
std::vector<std::string> keys_for(Command command);

/// Parses `key = value` lines (blank lines and '#' comments ignored) or a
/// JSON document: either a run's meta sidecar (its "config" object is used)
/// or a plain object of keys.
KeyValues parse_config_text(std::string_view text);

struct RunConfig {
  Command command = Command::Evolve;

  PulseSpec pulse;
  double detuning_mev = 0.0;
  double dipole_scale = 1.0;
  std::size_t samples = 401;

  EnsembleSpec ensemble;
  std::string preset = "fig4";
  SweepGrid grid;
  IntegratorParams integrator;

  std::string scan_kind = "rabi";
  std::vector<double> detunings_mev;
  std::vector<double> scan_phi2;

  std::string input;
  double level = 0.99;
  double contour_level = 0.95;

  std::string output;
  unsigned workers = 0;  ///< 0 = auto

  /// Effective value of every key for this command, canonically formatted.
  /// Written to the meta sidecar; feeding it back reproduces the run.
  KeyValues effective;
};

/// Builds a validated RunConfig. `values` may only hold keys of `command`
/// (plus "command" itself, which must then match). Throws ConfigError.
RunConfig build_config(Command command, const KeyValues& values);

/// Executes the run, writing `<output>` and `<output>.meta.json`. Returns
/// an exit code; messages go to `out` / `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point: parses argv (flags override --config),
/// then runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdarp::cli
