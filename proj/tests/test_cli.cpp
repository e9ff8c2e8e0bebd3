#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fsens/config.hpp"
#include "fsens/runner.hpp"
#include "json.hpp"

using namespace fsens;
namespace fs = std::filesystem;

namespace {

const char* kLinearConfig = R"(
# linear-gaussian smoke analysis
[model]
kind = linear
coeffs = 1 2

[inputs]
dim = 2
marginal = normal 0 1

[method]
divergence = squared_half

[weights]
family = shapley

[run]
n = 4000
seed = 42
dual = true
)";

fs::path fresh_dir(const char* name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing round trip") {
  AnalysisConfig config = AnalysisConfig::parse_text(kLinearConfig, ".");
  CHECK(config.model.kind() == ModelKind::linear);
  CHECK(config.inputs.dim() == 2);
  CHECK(config.method.pick_freeze);
  CHECK(config.weights.name() == "shapley");
  CHECK(config.n == 4000);
  CHECK(config.seed == 42);
  CHECK(config.dual);
  CHECK_FALSE(config.strict);
}

TEST_CASE("config error reporting names the field") {
  auto expect_error = [](const std::string& text, const char* needle) {
    CHECK_THROWS_WITH_AS(AnalysisConfig::parse_text(text, "."),
                         doctest::Contains(needle), ConfigError);
  };

  std::string base = kLinearConfig;
  expect_error(
      "[model]\nkind = linear\ncoeffs = 1 2\n[inputs]\ndim = 2\n"
      "marginal = normal 0 1\n[method]\ndivergence = squared_half\n"
      "[run]\nn = 100\n",
      "[run] seed");
  expect_error("[inputs]\ndim = 2\n", "[model] kind");

  std::string bad_div(base);
  bad_div.replace(bad_div.find("squared_half"), 12, "squared_HALF");
  expect_error(bad_div, "unknown divergence");

  std::string coeff_mismatch(base);
  coeff_mismatch.replace(coeff_mismatch.find("coeffs = 1 2"), 12,
                         "coeffs = 1 2 3");
  expect_error(coeff_mismatch, "coeffs");

  std::string stray(base);
  stray += "\n[run2]\nx = 1\n";
  expect_error(stray, "unknown section");

  std::string unknown_key(base);
  unknown_key += "\nn_iner = 10\n";  // typo lands in [output]... no: appended
  // after the last section, so it lands in [run].
  expect_error(unknown_key, "unknown key");
}

TEST_CASE("pi literals and correlation blocks parse") {
  const char* text = R"(
[model]
kind = ishigami

[inputs]
dim = 3
marginal = uniform -pi pi
dependence = independent

[method]
contrast = quantile 0.9

[weights]
family = mobius

[run]
n = 100
n_inner = 64
seed = 7
)";
  AnalysisConfig config = AnalysisConfig::parse_text(text, ".");
  CHECK(config.model.kind() == ModelKind::ishigami);
  CHECK(config.inputs.marginal(0).param_b() ==
        doctest::Approx(3.14159265358979));
  CHECK_FALSE(config.method.pick_freeze);
  CHECK(config.method.contrast.kind == ContrastKind::quantile);
  CHECK(config.method.contrast.alpha == 0.9);
  CHECK(config.n_inner == 64);

  const char* copula = R"(
[model]
kind = linear
coeffs = 1 1

[inputs]
dim = 2
marginal = normal 0 1
dependence = gaussian_copula

[correlation]
row_1 = 1 0.8
row_2 = 0.8 1

[method]
divergence = squared_half

[weights]
family = uniform

[run]
n = 100
seed = 1
)";
  AnalysisConfig cop = AnalysisConfig::parse_text(copula, ".");
  CHECK(cop.inputs.dependence() == Dependence::gaussian_copula);
  CHECK(cop.inputs.correlation()[1] == 0.8);
}

TEST_CASE("custom weight files are resolved and checked at parse time") {
  fs::path dir = fresh_dir("fsens_cli_weights");
  {
    std::ofstream out(dir / "w.weights");
    out << "{} {} 1\n{1} {2} 1\n{2} {1} 1\n{1,2} {} 1\n";
  }
  std::string text = kLinearConfig;
  text.replace(text.find("family = shapley"), 16,
               "family = custom\nfile = w.weights");
  AnalysisConfig config = AnalysisConfig::parse_text(text, dir);
  CHECK(config.weights.kind() == WeightKind::custom);
  CHECK(config.weights.weight_bits(0b01, 0b10) == 1.0);

  std::string missing = text;
  missing.replace(missing.find("w.weights"), 9, "nope.weights");
  CHECK_THROWS_WITH_AS(AnalysisConfig::parse_text(missing, dir),
                       doctest::Contains("does not exist"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("dim limit guards the lattice size") {
  std::string text = kLinearConfig;
  text += "\ndim_limit = 1\n";  // appended into [run]
  CHECK_THROWS_WITH_AS(AnalysisConfig::parse_text(text, "."),
                       doctest::Contains("dim_limit"), ConfigError);
}

TEST_CASE("explain weights reproduces the three-family table") {
  std::vector<WeightFamily> families = {WeightFamily::uniform(3),
                                        WeightFamily::mobius(3),
                                        WeightFamily::shapley(3)};
  WeightsTable table = explain_weights(3, SubsetMask::of(3, {2}), families);
  REQUIRE(table.row_labels.size() == 4);
  CHECK(table.row_labels[0] == "tau({2})");
  CHECK(table.row_labels[1] == "tau({2,3}) - tau({3})");
  CHECK(table.row_labels[2] == "tau({1,2}) - tau({1})");
  CHECK(table.row_labels[3] == "tau({1,2,3}) - tau({1,3})");
  for (int r = 0; r < 4; ++r)
    CHECK(table.row_weights[r][0] == doctest::Approx(0.25));
  CHECK(table.row_weights[0][1] == 1.0);
  CHECK(table.row_weights[1][1] == 0.0);
  CHECK(table.row_weights[2][1] == 0.0);
  CHECK(table.row_weights[3][1] == 0.0);
  CHECK(table.row_weights[0][2] == doctest::Approx(1.0 / 3));
  CHECK(table.row_weights[1][2] == doctest::Approx(1.0 / 6));
  CHECK(table.row_weights[2][2] == doctest::Approx(1.0 / 6));
  CHECK(table.row_weights[3][2] == doctest::Approx(1.0 / 3));

  WeightsTable single =
      explain_weights(1, SubsetMask::of(1, {1}), {WeightFamily::uniform(1)});
  REQUIRE(single.row_labels.size() == 1);
  CHECK(single.row_weights[0][0] == 1.0);

  WeightsTable grand = explain_weights(3, SubsetMask::full(3), families);
  REQUIRE(grand.row_labels.size() == 1);
  CHECK(grand.row_labels[0] == "tau({1,2,3})");
  for (double w : grand.row_weights[0]) CHECK(w == 1.0);

  std::ostringstream out;
  print_weights_table(out, table);
  CHECK(out.str().find("uniform") != std::string::npos);
  CHECK(out.str().find("tau({1,2,3}) - tau({1,3})") != std::string::npos);
}

TEST_CASE("run writes the full report set deterministically") {
  fs::path dir_a = fresh_dir("fsens_run_a");
  fs::path dir_b = fresh_dir("fsens_run_b");

  AnalysisConfig config = AnalysisConfig::parse_text(kLinearConfig, ".");
  config.out_dir = dir_a;
  RunResult result = run(config);
  CHECK(result.exit_status == exit_code::ok);

  for (const char* name :
       {"sensitivity_map.csv", "effects.csv", "dual_map.csv",
        "dual_effects.csv", "verifiers.csv", "manifest.json"})
    CHECK(fs::exists(dir_a / name));

  // Map csv: header plus 2^d rows, empty set first with exact zero.
  std::string map_csv = slurp(dir_a / "sensitivity_map.csv");
  CHECK(map_csv.substr(0, map_csv.find('\n')) ==
        "x1,x2,subset,estimate,std_error,n,estimator");
  CHECK(map_csv.find("0,0,\"{}\",0,0,0,exact") != std::string::npos);

  // Byte-identical rerun.
  config.out_dir = dir_b;
  run(config);
  for (const char* name :
       {"sensitivity_map.csv", "effects.csv", "dual_map.csv",
        "dual_effects.csv", "verifiers.csv", "manifest.json"})
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));

  // Manifest is valid json and echoes the run parameters.
  nlohmann::json manifest = nlohmann::json::parse(slurp(dir_a / "manifest.json"));
  CHECK(manifest["seed"] == 42);
  CHECK(manifest["weights"] == "shapley");
  CHECK(manifest["dim"] == 2);

  // Shapley weights pass their identity checks in the verifier table.
  std::string verifiers = slurp(dir_a / "verifiers.csv");
  CHECK(verifiers.find("shapley_condition") != std::string::npos);
  CHECK(verifiers.find("shapley_sum") != std::string::npos);

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("run under mobius weights satisfies the decomposition verifier") {
  fs::path dir = fresh_dir("fsens_run_mobius");
  AnalysisConfig config = AnalysisConfig::parse_text(kLinearConfig, ".");
  config.out_dir = dir;
  config.strict = true;
  ConfigOverrides to_mobius;
  to_mobius.weights = "mobius";
  apply_overrides(config, to_mobius);
  CHECK(config.weights.kind() == WeightKind::mobius);
  RunResult result = run(config);
  CHECK(result.exit_status == exit_code::ok);

  std::string verifiers = slurp(dir / "verifiers.csv");
  // sobol_decomposition row: expected yes, pass yes.
  std::istringstream lines(verifiers);
  std::string line;
  bool found = false;
  while (std::getline(lines, line))
    if (line.find("sobol_decomposition") == 0) {
      found = true;
      CHECK(line.find(",yes,yes,") != std::string::npos);
    }
  CHECK(found);
  fs::remove_all(dir);
}

TEST_CASE("estimation failures surface as exit code 3 with subsets named") {
  fs::path dir = fresh_dir("fsens_run_fail");
  const char* text = R"(
[model]
kind = polynomial
term_1 = 1e308 : 2 0

[inputs]
dim = 2
marginal = uniform 2 3

[method]
divergence = squared_half

[weights]
family = uniform

[run]
n = 50
seed = 3
)";
  AnalysisConfig config = AnalysisConfig::parse_text(text, ".");
  config.out_dir = dir;
  RunResult result = run(config);
  CHECK(result.exit_status == exit_code::estimation_error);
  CHECK_FALSE(result.messages.empty());
  nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["failures"].size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("overrides replace seed and weight family") {
  AnalysisConfig config = AnalysisConfig::parse_text(kLinearConfig, ".");
  ConfigOverrides overrides;
  overrides.seed = 99;
  overrides.weights = "uniform";
  overrides.strict = true;
  apply_overrides(config, overrides);
  CHECK(config.seed == 99);
  CHECK(config.weights.kind() == WeightKind::uniform);
  CHECK(config.strict);

  ConfigOverrides bad;
  bad.weights = "no_such_family_or_file";
  CHECK_THROWS_AS(apply_overrides(config, bad), ConfigError);
}

}  // TEST_SUITE
