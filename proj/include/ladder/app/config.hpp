#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ladder/basis.hpp"
#include "ladder/ground_state.hpp"
#include "ladder/xxz_analytic.hpp"

namespace ladder::app {

/// Bad or inconsistent run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw key -> value settings from one source.
using Settings = std::map<std::string, std::string>;

/// Every key a config file, the environment or a flag may set.
const std::vector<std::string>& known_keys();

struct RunConfig {
  double j_perp = 13.0;
  double j_par = 1.15;
  std::vector<int> sizes{8};
  double h_min = 0.0;
  double h_max = 16.0;
  double h_step = 0.01;
  double delta = 1e-3;
  double luttinger_k = 1.0;
  double a_zz = 1.0;
  double b_zz = 1.0;
  double a_pm = 1.0;
  double b_pm = 1.0;
  int separation = 1;
  double window = 0.2;
  int points = 200;
  int levels = 1;
  double tol = 1e-10;
  int max_iter = 0;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  std::filesystem::path input;

  LadderGeometry geometry(int L) const;
  SweepOptions sweep_options() const;
  AnalyticParams analytic() const;
  /// hmin, hmin + hstep, ... up to hmax (inclusive within round-off).
  std::vector<double> field_grid() const;
};

/// "8", "4-12" (every L), "4-12:2" (stride) or "4,6,8".
std::vector<int> parse_sizes(const std::string& text);

/// key = value lines; '#' starts a comment. Throws ConfigError on unknown
/// keys or malformed lines.
Settings read_config_file(const std::filesystem::path& path);

/// LADDER_<KEY> variables, key upper-cased (LADDER_JPERP, LADDER_HSTEP, ...).
Settings read_environment();

/// Defaults, then config file, then environment, then flags. Validates the
/// result; throws ConfigError.
RunConfig resolve(const Settings& file, const Settings& env, const Settings& flags);

}  // namespace ladder::app
