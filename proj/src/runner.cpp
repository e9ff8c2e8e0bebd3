#include "fsens/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fsens/version.hpp"
#include "json.hpp"

namespace fsens {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::pick_freeze: return "pick_freeze";
    case EstimatorKind::double_loop_contrast: return "double_loop_contrast";
    case EstimatorKind::exact: return "exact";
  }
  return "";
}

void write_file(const std::filesystem::path& path, const std::string& body,
                RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  result.files.push_back(path);
}

std::string bit_columns_header(int d) {
  std::string header;
  for (int i = 1; i <= d; ++i) header += "x" + std::to_string(i) + ",";
  return header;
}

std::string bit_columns(SubsetMask s) {
  std::string cells;
  for (int i = 1; i <= s.dim(); ++i)
    cells += s.contains(i) ? "1," : "0,";
  return cells;
}

// Rows follow the report layout: input 1 is the leftmost fluctuation column
// and toggles slowest.
std::string map_csv(const SensitivityMapEstimate& estimate, int d) {
  std::ostringstream out;
  out << bit_columns_header(d) << "subset,estimate,std_error,n,estimator\n";
  for (std::uint32_t row = 0; row < estimate.reports.size(); ++row) {
    SubsetMask s = SubsetMask::from_table_row(d, row);
    const EstimateReport& rep = estimate.reports[s.bits()];
    out << bit_columns(s) << "\"" << s.label() << "\"," << fmt(rep.estimate)
        << "," << fmt(rep.std_error) << "," << rep.n << ","
        << estimator_name(rep.kind) << "\n";
  }
  return out.str();
}

std::string effects_csv(const EffectTable& table,
                        const std::vector<double>& subset_se, bool from_dual,
                        const WeightFamily& weights) {
  const int d = table.dim();
  std::ostringstream out;
  out << bit_columns_header(d) << "subset,order,effect,std_error\n";
  for (std::uint32_t row = 0; row < table.effects.size(); ++row) {
    SubsetMask s = SubsetMask::from_table_row(d, row);
    double se = effect_std_error(subset_se, s, weights, from_dual);
    out << bit_columns(s) << "\"" << s.label() << "\"," << s.count() << ","
        << fmt(table.effects[s]) << "," << fmt(se) << "\n";
  }
  return out.str();
}

struct VerifierRow {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool expected = false;  // counted by --strict only when expected
  std::string detail;
};

std::string verifiers_csv(const std::vector<VerifierRow>& rows) {
  std::ostringstream out;
  out << "check,statistic,threshold,pass,expected,detail\n";
  for (const VerifierRow& r : rows)
    out << r.name << "," << fmt(r.statistic) << "," << fmt(r.threshold) << ","
        << (r.pass ? "yes" : "no") << "," << (r.expected ? "yes" : "no")
        << ",\"" << r.detail << "\"\n";
  return out.str();
}

}  // namespace

RunResult run(const AnalysisConfig& config) {
  RunResult result;
  const int d = config.inputs.dim();
  std::filesystem::create_directories(config.out_dir);

  EstimationOptions options;
  options.n = config.n;
  options.n_inner = config.n_inner;
  options.shared_base = config.shared_base;
  options.dim_limit = config.dim_limit;

  SensitivityMapEstimate estimate = estimate_sensitivity_map(
      config.model, config.inputs, config.method, options, config.seed);

  write_file(config.out_dir / "sensitivity_map.csv", map_csv(estimate, d),
             result);

  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = config.seed;
  manifest["dim"] = d;
  manifest["model"] = config.model.describe();
  manifest["inputs"] = config.inputs.describe();
  manifest["method"] = config.method.name();
  manifest["weights"] = config.weights.name();
  manifest["n"] = config.n;
  manifest["n_inner"] =
      config.method.pick_freeze
          ? 0
          : (config.n_inner ? config.n_inner : default_inner_size(config.n));
  manifest["shared_base"] = config.shared_base;
  manifest["dual"] = config.dual;
  manifest["strict"] = config.strict;

  if (!estimate.ok()) {
    nlohmann::json failures = nlohmann::json::array();
    for (const SubsetFailure& f : estimate.failures) {
      failures.push_back({{"subset", f.subset.label()}, {"error", f.message}});
      result.messages.push_back("estimation failed: " + f.message);
    }
    manifest["failures"] = failures;
    write_file(config.out_dir / "manifest.json", manifest.dump(2) + "\n",
               result);
    result.exit_status = exit_code::estimation_error;
    return result;
  }

  const std::vector<double> subset_se = estimate.std_errors();

  EffectTable table = effect_table(estimate.map, config.weights, "estimated");
  write_file(config.out_dir / "effects.csv",
             effects_csv(table, subset_se, false, config.weights), result);

  if (config.dual) {
    LatticeMap dual_map = dual(estimate.map);
    const std::uint32_t full = static_cast<std::uint32_t>(dual_map.size()) - 1;
    std::ostringstream dual_csv;
    dual_csv << bit_columns_header(d) << "subset,value,std_error\n";
    for (std::uint32_t row = 0; row < dual_map.size(); ++row) {
      SubsetMask s = SubsetMask::from_table_row(d, row);
      // tau*(A) = tau(D) - tau(D\A); the two estimates are independent.
      double se = s.is_empty() ? 0.0
                               : std::hypot(subset_se[full],
                                            subset_se[full ^ s.bits()]);
      dual_csv << bit_columns(s) << "\"" << s.label() << "\","
               << fmt(dual_map[s]) << "," << fmt(se) << "\n";
    }
    write_file(config.out_dir / "dual_map.csv", dual_csv.str(), result);

    EffectTable dual_table =
        dual_effect_table(estimate.map, config.weights, "estimated");
    write_file(config.out_dir / "dual_effects.csv",
               effects_csv(dual_table, subset_se, true, config.weights),
               result);
  }

  // Verifiers. "expected" marks identities the chosen weight family is
  // supposed to satisfy; the rest are informative diagnostics.
  std::vector<VerifierRow> verifier_rows;

  WeightValidation wv = validate(config.weights);
  verifier_rows.push_back({"weight_normalization", wv.max_deviation, wv.tol,
                           wv.pass, true,
                           "worst B=" + SubsetMask(d, wv.worst_b).label()});
  verifier_rows.push_back(
      {"weight_nonnegativity", static_cast<double>(wv.negative_count), 0.0,
       wv.negative_count == 0, true,
       wv.negative_count == 0
           ? ""
           : "first at B=" + SubsetMask(d, wv.first_negative_b).label()});

  ShapleyConditionReport sc = check_shapley_condition(config.weights);
  double sc_stat = std::max({std::fabs(sc.empty_sum - 1.0),
                             std::fabs(sc.full_sum - 1.0), sc.max_middle});
  verifier_rows.push_back(
      {"shapley_condition", sc_stat, sc.tol, sc.pass,
       config.weights.kind() == WeightKind::shapley,
       "empty_sum=" + fmt(sc.empty_sum) + " full_sum=" + fmt(sc.full_sum)});

  ResidualReport sobol = verify_sobol_decomposition(estimate.map, table);
  verifier_rows.push_back(
      {"sobol_decomposition", sobol.max_residual, sobol.tol, sobol.pass,
       config.weights.kind() == WeightKind::mobius,
       "argmax A=" + SubsetMask(d, sobol.argmax).label()});

  ResidualReport shap = verify_shapley_sum(estimate.map, table);
  verifier_rows.push_back({"shapley_sum", shap.max_residual, shap.tol,
                           shap.pass, sc.pass,
                           "sum of singleton effects vs tau(D)"});

  write_file(config.out_dir / "verifiers.csv", verifiers_csv(verifier_rows),
             result);

  bool verifier_failed = false;
  for (const VerifierRow& row : verifier_rows)
    if (row.expected && !row.pass) {
      verifier_failed = true;
      result.messages.push_back("verifier failed: " + row.name +
                                " (statistic " + fmt(row.statistic) + ")");
    }

  nlohmann::json file_list = nlohmann::json::array();
  for (const std::filesystem::path& p : result.files)
    file_list.push_back(p.filename().string());
  file_list.push_back("manifest.json");
  manifest["files"] = file_list;
  nlohmann::json verifier_json = nlohmann::json::array();
  for (const VerifierRow& row : verifier_rows)
    verifier_json.push_back({{"check", row.name},
                             {"statistic", row.statistic},
                             {"pass", row.pass},
                             {"expected", row.expected}});
  manifest["verifiers"] = verifier_json;
  write_file(config.out_dir / "manifest.json", manifest.dump(2) + "\n",
             result);

  if (config.strict && verifier_failed)
    result.exit_status = exit_code::verifier_failure;
  return result;
}

WeightsTable explain_weights(int dim, SubsetMask b,
                             const std::vector<WeightFamily>& families) {
  if (b.dim() != dim)
    throw std::invalid_argument("explain_weights: mask dim mismatch");
  for (const WeightFamily& w : families)
    if (w.dim() != dim)
      throw std::invalid_argument("explain_weights: family \"" + w.name() +
                                  "\" has dim " + std::to_string(w.dim()));

  WeightsTable table;
  table.dim = dim;
  table.b = b;
  for (const WeightFamily& w : families) table.family_names.push_back(w.name());

  const std::uint32_t count = std::uint32_t{1} << dim;
  for (std::uint32_t row = 0; row < count; ++row) {
    SubsetMask a = SubsetMask::from_table_row(dim, row);
    if (!a.disjoint_from(b)) continue;
    std::string label = "tau(" + (b | a).label() + ")";
    if (!a.is_empty()) label += " - tau(" + a.label() + ")";
    table.row_labels.push_back(label);
    std::vector<double> weights;
    weights.reserve(families.size());
    for (const WeightFamily& w : families) weights.push_back(w.weight(b, a));
    table.row_weights.push_back(std::move(weights));
  }
  return table;
}

void print_weights_table(std::ostream& out, const WeightsTable& table) {
  std::size_t label_width = 18;
  for (const std::string& label : table.row_labels)
    label_width = std::max(label_width, label.size());

  out << "weights for I(" << table.b.label() << "), d=" << table.dim << "\n";
  out << std::left << std::setw(static_cast<int>(label_width) + 2)
      << "conditional effect";
  for (const std::string& name : table.family_names)
    out << std::right << std::setw(14) << name;
  out << "\n";
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(label_width) + 2)
        << table.row_labels[r];
    for (double w : table.row_weights[r]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", w);
      out << std::right << std::setw(14) << buf;
    }
    out << "\n";
  }
}

}  // namespace fsens
