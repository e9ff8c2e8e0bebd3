#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsens/config.hpp"
#include "fsens/effects.hpp"

namespace fsens {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int estimation_error = 3;
inline constexpr int verifier_failure = 4;
}  // namespace exit_code

struct RunResult {
  int exit_status = exit_code::ok;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> messages;
};

// Runs one analysis end to end: estimates the sensitivity map, computes the
// effect tables (plus dual tables when requested), evaluates the verifiers
// and writes the report files. Identical config and seed produce
// byte-identical files.
RunResult run(const AnalysisConfig& config);

// Weight-comparison table for one target subset: one row per conditional
// effect, one column of weights per family.
struct WeightsTable {
  int dim = 0;
  SubsetMask b = SubsetMask::empty(1);
  std::vector<std::string> family_names;
  std::vector<std::string> row_labels;           // conditional-effect terms
  std::vector<std::vector<double>> row_weights;  // one weight per family
};
WeightsTable explain_weights(int dim, SubsetMask b,
                             const std::vector<WeightFamily>& families);
void print_weights_table(std::ostream& out, const WeightsTable& table);

}  // namespace fsens
