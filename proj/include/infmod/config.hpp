#pragma once

#include <string>

#include "infmod/checks.hpp"
#include "infmod/dynamics.hpp"
#include "infmod/harness.hpp"

namespace infmod {

/// Everything one configuration file can set. Defaults reproduce the
/// standard setup (quadratic m with s = 1, r = 2, kappa = 1, x0 = 0.3,
/// L = 0.7, grid [-6, 6] with 1024 points, t_end = 1, dt_factor = 0.1).
struct AppConfig {
  RunConfig run;
  SweepSettings sweep;
  ContrastSettings contrast;
  SuiteConfig suite;  ///< `suite.base` is kept equal to `run`
};

/// Parses YAML text. Unknown keys, wrong types and invalid values throw
/// config_invalid with the offending key path in the message.
AppConfig parse_config(const std::string& yaml_text);
AppConfig load_config(const std::string& path);

}  // namespace infmod
