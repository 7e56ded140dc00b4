#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "salm/errors.hpp"
#include "salm/outer_auglag.hpp"
#include "salm/problem.hpp"
#include "salm/problems.hpp"

namespace salm::app {

/// Invalid or unreadable configuration. `key()` names the offending entry as
/// "section.key" when there is one.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct QuadraticConfig {
  int dim = 3;
  double noise_sigma = 0.1;
  double gradient_bias = 0.0;
};

struct RunConfig {
  std::string problem = "quadratic";
  QuadraticConfig quadratic;
  MultiShapeOptions multishape;
  AlParams auglag;
  ScheduleParams schedule;
  Termination termination;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir = "out";
  bool record_timing = false;
  bool write_steps = true;
};

/// Parses an INI file with sections [problem], [auglag], [schedule],
/// [termination] and [run]. Unknown sections or keys are errors.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

/// Builds the configured problem.
ProblemDefinition make_problem(const RunConfig& config);

/// The reference constants as an INI fragment.
std::string defaults_text();

}  // namespace salm::app
