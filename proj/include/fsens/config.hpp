#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "fsens/estimators.hpp"
#include "fsens/input_model.hpp"
#include "fsens/models.hpp"
#include "fsens/weights.hpp"

namespace fsens {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A fully resolved analysis: every referenced file has been read, all
// dimensions cross-checked, and the seed is explicit (no wall-clock default).
struct AnalysisConfig {
  Model model;
  InputDistribution inputs;
  EstimationMethod method;
  WeightFamily weights;

  std::size_t n = 0;
  std::size_t n_inner = 0;  // 0: estimator default
  bool shared_base = false;
  std::uint64_t seed = 0;
  bool dual = false;
  bool strict = false;
  int dim_limit = kDefaultDimLimit;
  std::filesystem::path out_dir = "out";

  // Parses the key/value section format. Relative paths inside the config
  // resolve against base_dir. Throws ConfigError naming the offending field.
  static AnalysisConfig parse_text(const std::string& text,
                                   const std::filesystem::path& base_dir);
  static AnalysisConfig load(const std::filesystem::path& path);
};

// Command-line overrides applied after parsing.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<bool> strict;
  std::optional<bool> dual;
  std::optional<std::string> weights;  // family name or custom-weight file
};
void apply_overrides(AnalysisConfig& config, const ConfigOverrides& overrides);

}  // namespace fsens
