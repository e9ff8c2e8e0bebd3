#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsens/config.hpp"
#include "fsens/runner.hpp"
#include "fsens/version.hpp"

namespace {

int run_analysis(const std::string& config_path,
                 const fsens::ConfigOverrides& overrides) {
  fsens::AnalysisConfig config = fsens::AnalysisConfig::load(config_path);
  fsens::apply_overrides(config, overrides);
  fsens::RunResult result = fsens::run(config);
  for (const std::string& message : result.messages)
    std::cerr << "fsens: " << message << "\n";
  for (const auto& file : result.files) std::cout << file.string() << "\n";
  return result.exit_status;
}

int show_weights_table(int dim, const std::string& subset,
                       const std::vector<std::string>& family_names) {
  fsens::SubsetMask b = fsens::SubsetMask::parse(dim, subset);
  std::vector<fsens::WeightFamily> families;
  for (const std::string& name : family_names) {
    if (name == "uniform")
      families.push_back(fsens::WeightFamily::uniform(dim));
    else if (name == "mobius")
      families.push_back(fsens::WeightFamily::mobius(dim));
    else if (name == "shapley")
      families.push_back(fsens::WeightFamily::shapley(dim));
    else
      families.push_back(fsens::load_weight_family(name, dim));
  }
  fsens::print_weights_table(std::cout,
                             fsens::explain_weights(dim, b, families));
  return fsens::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global sensitivity analysis via weighted factorial effects"};
  app.set_version_flag("--version", fsens::kVersion);

  std::string config_path;
  std::string table_kind;
  std::string out_dir;
  std::string weights;
  std::string subset = "{1}";
  std::uint64_t seed = 0;
  int dim = 3;
  bool strict = false, dual = false;
  std::vector<std::string> families = {"uniform", "mobius", "shapley"};

  app.add_option("--config", config_path, "Analysis config file");
  auto* seed_opt =
      app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_flag("--strict", strict,
               "Exit 4 when an expected verifier fails");
  app.add_flag("--dual", dual, "Also emit the dual map and dual effects");
  app.add_option("--weights", weights,
                 "Weight family: uniform|mobius|shapley or a custom file");
  app.add_option("--table", table_kind,
                 "Print a reference table instead of running (\"weights\")");
  app.add_option("--dim", dim, "Input count for --table");
  app.add_option("--subset", subset, "Target subset for --table, e.g. {2}");
  app.add_option("--families", families,
                 "Families for --table (names or custom files)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (!table_kind.empty()) {
      if (table_kind != "weights") {
        std::cerr << "fsens: unknown table \"" << table_kind << "\"\n";
        return fsens::exit_code::config_error;
      }
      return show_weights_table(dim, subset, families);
    }

    if (config_path.empty()) {
      std::cerr << "fsens: --config is required (or use --table weights)\n";
      return fsens::exit_code::config_error;
    }

    fsens::ConfigOverrides overrides;
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (strict) overrides.strict = true;
    if (dual) overrides.dual = true;
    if (!weights.empty()) overrides.weights = weights;
    return run_analysis(config_path, overrides);
  } catch (const fsens::ConfigError& e) {
    std::cerr << "fsens: " << e.what() << "\n";
    return fsens::exit_code::config_error;
  } catch (const fsens::EstimationError& e) {
    std::cerr << "fsens: estimation failed: " << e.what() << "\n";
    return fsens::exit_code::estimation_error;
  } catch (const std::exception& e) {
    std::cerr << "fsens: " << e.what() << "\n";
    return fsens::exit_code::config_error;
  }
}
