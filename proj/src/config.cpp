#include "fsens/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace fsens {

namespace {

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  std::size_t lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return "";
  std::size_t hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

SectionMap parse_sections(const std::string& text) {
  SectionMap sections;
  std::istringstream in(text);
  std::string line, current;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    if (!sections[current].emplace(key, value).second)
      throw ConfigError("config: duplicate key [" + current + "] " + key);
  }
  return sections;
}

// Numeric token; "pi" and "-pi" are accepted so bounds like uniform(-pi, pi)
// are exact in the config.
double parse_number(const std::string& token, const std::string& field) {
  constexpr double pi = 3.14159265358979323846;
  if (token == "pi") return pi;
  if (token == "-pi") return -pi;
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + field + ": cannot parse number \"" + token +
                      "\"");
  }
}

std::vector<std::string> tokens_of(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<double> parse_numbers(const std::string& value,
                                  const std::string& field) {
  std::vector<double> out;
  for (std::string& tok : tokens_of(value)) {
    // allow comma separated lists as well
    std::string t = tok;
    std::size_t pos = 0;
    while ((pos = t.find(',')) != std::string::npos) {
      std::string head = trim(t.substr(0, pos));
      if (!head.empty()) out.push_back(parse_number(head, field));
      t = t.substr(pos + 1);
    }
    t = trim(t);
    if (!t.empty()) out.push_back(parse_number(t, field));
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& field) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + field + ": expected a boolean, got \"" +
                    value + "\"");
}

std::uint64_t parse_u64(const std::string& value, const std::string& field) {
  std::uint64_t out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config: " + field +
                      ": expected an unsigned integer, got \"" + value + "\"");
  return out;
}

class SectionReader {
 public:
  SectionReader(const SectionMap& sections, std::string name)
      : name_(std::move(name)) {
    auto it = sections.find(name_);
    if (it != sections.end()) entries_ = &it->second;
  }

  bool present() const { return entries_ != nullptr; }

  std::optional<std::string> get(const std::string& key) {
    if (!entries_) return std::nullopt;
    auto it = entries_->find(key);
    if (it == entries_->end()) return std::nullopt;
    used_.push_back(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v)
      throw ConfigError("config: [" + name_ + "] " + key + " is required");
    return *v;
  }

  std::string field(const std::string& key) const {
    return "[" + name_ + "] " + key;
  }

  void reject_unknown() const {
    if (!entries_) return;
    for (const auto& [key, value] : *entries_) {
      bool known = false;
      for (const std::string& u : used_)
        if (u == key) known = true;
      if (!known)
        throw ConfigError("config: unknown key [" + name_ + "] " + key);
    }
  }

 private:
  std::string name_;
  const std::map<std::string, std::string>* entries_ = nullptr;
  std::vector<std::string> used_;
};

Marginal parse_marginal(const std::string& value, const std::string& field) {
  std::vector<std::string> toks = tokens_of(value);
  if (toks.empty())
    throw ConfigError("config: " + field + ": empty marginal spec");
  const std::string& kind = toks[0];
  auto num = [&](std::size_t i) { return parse_number(toks[i], field); };
  if (kind == "uniform") {
    if (toks.size() != 3)
      throw ConfigError("config: " + field + ": expected \"uniform a b\"");
    return Marginal::uniform(num(1), num(2));
  }
  if (kind == "normal") {
    if (toks.size() != 3)
      throw ConfigError("config: " + field + ": expected \"normal mu sigma\"");
    return Marginal::normal(num(1), num(2));
  }
  if (kind == "discrete") {
    if (toks.size() < 3 || toks.size() % 2 == 0)
      throw ConfigError("config: " + field +
                        ": expected \"discrete x1 p1 x2 p2 ...\"");
    std::vector<double> points, probs;
    for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
      points.push_back(num(i));
      probs.push_back(num(i + 1));
    }
    return Marginal::discrete(std::move(points), std::move(probs));
  }
  throw ConfigError("config: " + field + ": unknown marginal kind \"" + kind +
                    "\"");
}

Model parse_model(SectionReader& section, int dim) {
  std::string kind = section.require("kind");
  if (kind == "linear") {
    std::vector<double> coeffs =
        parse_numbers(section.require("coeffs"), section.field("coeffs"));
    if (static_cast<int>(coeffs.size()) != dim)
      throw ConfigError("config: [model] coeffs has " +
                        std::to_string(coeffs.size()) + " entries for dim " +
                        std::to_string(dim));
    return Model::linear(std::move(coeffs));
  }
  if (kind == "ishigami") {
    double a = 7.0, b = 0.1;
    if (auto v = section.get("a")) a = parse_number(*v, section.field("a"));
    if (auto v = section.get("b")) b = parse_number(*v, section.field("b"));
    if (dim != 3)
      throw ConfigError("config: ishigami model requires dim = 3");
    return Model::ishigami(a, b);
  }
  if (kind == "product") return Model::product(dim);
  if (kind == "square_plus") {
    if (dim != 2)
      throw ConfigError("config: square_plus model requires dim = 2");
    return Model::square_plus();
  }
  if (kind == "polynomial") {
    std::vector<PolynomialTerm> terms;
    for (int t = 1;; ++t) {
      auto v = section.get("term_" + std::to_string(t));
      if (!v) break;
      std::string field = section.field("term_" + std::to_string(t));
      std::size_t colon = v->find(':');
      if (colon == std::string::npos)
        throw ConfigError("config: " + field +
                          ": expected \"coefficient : e1 e2 ... ed\"");
      PolynomialTerm term;
      term.coefficient = parse_number(trim(v->substr(0, colon)), field);
      for (double e : parse_numbers(v->substr(colon + 1), field)) {
        if (e < 0 || e != std::floor(e))
          throw ConfigError("config: " + field +
                            ": exponents must be nonnegative integers");
        term.exponents.push_back(static_cast<int>(e));
      }
      if (static_cast<int>(term.exponents.size()) != dim)
        throw ConfigError("config: " + field + ": expected " +
                          std::to_string(dim) + " exponents");
      terms.push_back(std::move(term));
    }
    if (terms.empty())
      throw ConfigError("config: [model] polynomial needs term_1, term_2, ...");
    return Model::polynomial(dim, std::move(terms));
  }
  throw ConfigError("config: [model] unknown kind \"" + kind + "\"");
}

InputDistribution parse_inputs(SectionReader& inputs, SectionReader& corr,
                               int dim) {
  std::vector<Marginal> marginals;
  auto shared = inputs.get("marginal");
  for (int j = 1; j <= dim; ++j) {
    auto v = inputs.get("marginal_" + std::to_string(j));
    if (v) {
      marginals.push_back(parse_marginal(*v, inputs.field("marginal_" +
                                                          std::to_string(j))));
    } else if (shared) {
      marginals.push_back(parse_marginal(*shared, inputs.field("marginal")));
    } else {
      throw ConfigError("config: [inputs] marginal_" + std::to_string(j) +
                        " is required (or set a shared \"marginal\")");
    }
  }

  std::string dep = inputs.get("dependence").value_or("independent");
  if (dep == "independent") {
    if (corr.present())
      throw ConfigError(
          "config: [correlation] given but dependence is independent");
    return InputDistribution::independent(marginals);
  }
  if (dep != "gaussian_copula")
    throw ConfigError("config: [inputs] unknown dependence \"" + dep + "\"");

  if (!corr.present())
    throw ConfigError(
        "config: [correlation] section is required for gaussian_copula");
  std::vector<double> r(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 1; i <= dim; ++i) {
    std::string key = "row_" + std::to_string(i);
    std::vector<double> row = parse_numbers(corr.require(key), corr.field(key));
    if (static_cast<int>(row.size()) != dim)
      throw ConfigError("config: " + corr.field(key) + ": expected " +
                        std::to_string(dim) + " entries");
    for (int j = 0; j < dim; ++j) r[(i - 1) * dim + j] = row[j];
  }
  try {
    return InputDistribution::gaussian_copula(std::move(marginals),
                                              std::move(r));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: [correlation] ") + e.what());
  }
}

EstimationMethod parse_method(SectionReader& section) {
  auto div = section.get("divergence");
  auto con = section.get("contrast");
  if (div && con)
    throw ConfigError(
        "config: [method] set either divergence or contrast, not both");
  if (div) {
    if (*div == "squared_half")
      return EstimationMethod::with_divergence(Divergence::squared_half());
    if (*div == "absolute")
      return EstimationMethod::with_divergence(Divergence::absolute());
    throw ConfigError("config: [method] unknown divergence \"" + *div + "\"");
  }
  if (con) {
    std::vector<std::string> toks = tokens_of(*con);
    if (toks.size() == 1 && toks[0] == "mean")
      return EstimationMethod::with_contrast(Contrast::mean());
    if (toks.size() == 1 && toks[0] == "median")
      return EstimationMethod::with_contrast(Contrast::median());
    if (toks.size() == 2 && toks[0] == "quantile")
      return EstimationMethod::with_contrast(Contrast::quantile(
          parse_number(toks[1], section.field("contrast"))));
    throw ConfigError("config: [method] unknown contrast \"" + *con + "\"");
  }
  throw ConfigError("config: [method] divergence or contrast is required");
}

WeightFamily parse_weights(SectionReader& section, int dim,
                           const std::filesystem::path& base_dir) {
  std::string family = section.get("family").value_or("uniform");
  if (family == "uniform") return WeightFamily::uniform(dim);
  if (family == "mobius") return WeightFamily::mobius(dim);
  if (family == "shapley") return WeightFamily::shapley(dim);
  if (family != "custom")
    throw ConfigError("config: [weights] unknown family \"" + family + "\"");

  std::filesystem::path file = section.require("file");
  if (file.is_relative()) file = base_dir / file;
  if (!std::filesystem::exists(file))
    throw ConfigError("config: [weights] file does not exist: " +
                      file.string());
  try {
    return load_weight_family(file, dim);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: [weights] ") + e.what());
  }
}

}  // namespace

AnalysisConfig AnalysisConfig::parse_text(
    const std::string& text, const std::filesystem::path& base_dir) {
  SectionMap sections = parse_sections(text);
  for (const auto& [name, entries] : sections)
    if (name != "model" && name != "inputs" && name != "correlation" &&
        name != "method" && name != "weights" && name != "run" &&
        name != "output")
      throw ConfigError("config: unknown section [" + name + "]");

  SectionReader model_s(sections, "model");
  SectionReader inputs_s(sections, "inputs");
  SectionReader corr_s(sections, "correlation");
  SectionReader method_s(sections, "method");
  SectionReader weights_s(sections, "weights");
  SectionReader run_s(sections, "run");
  SectionReader output_s(sections, "output");

  int dim = static_cast<int>(parse_u64(inputs_s.require("dim"),
                                       inputs_s.field("dim")));
  if (dim < 1 || dim > kMaxDim)
    throw ConfigError("config: [inputs] dim must be in [1, " +
                      std::to_string(kMaxDim) + "]");

  AnalysisConfig config{parse_model(model_s, dim),
                        parse_inputs(inputs_s, corr_s, dim),
                        parse_method(method_s),
                        parse_weights(weights_s, dim, base_dir)};

  // [run]
  auto n = run_s.get("n");
  auto n_total = run_s.get("n_total");
  if (n && n_total)
    throw ConfigError("config: [run] set either n or n_total, not both");
  if (n) {
    config.n = parse_u64(*n, run_s.field("n"));
  } else if (n_total) {
    config.n = split_budget(parse_u64(*n_total, run_s.field("n_total")), dim);
  } else {
    throw ConfigError("config: [run] n (per subset) or n_total is required");
  }
  if (config.n < 2) throw ConfigError("config: [run] n must be at least 2");

  if (auto v = run_s.get("n_inner"))
    config.n_inner = parse_u64(*v, run_s.field("n_inner"));
  config.seed = parse_u64(run_s.require("seed"), run_s.field("seed"));
  if (auto v = run_s.get("dual"))
    config.dual = parse_bool(*v, run_s.field("dual"));
  if (auto v = run_s.get("strict"))
    config.strict = parse_bool(*v, run_s.field("strict"));
  if (auto v = run_s.get("shared_base"))
    config.shared_base = parse_bool(*v, run_s.field("shared_base"));
  if (auto v = run_s.get("dim_limit")) {
    config.dim_limit =
        static_cast<int>(parse_u64(*v, run_s.field("dim_limit")));
    if (config.dim_limit < 1 || config.dim_limit > kMaxDim)
      throw ConfigError("config: [run] dim_limit must be in [1, " +
                        std::to_string(kMaxDim) + "]");
  }
  if (dim > config.dim_limit)
    throw ConfigError("config: dim " + std::to_string(dim) +
                      " exceeds dim_limit " + std::to_string(config.dim_limit) +
                      " (raise [run] dim_limit deliberately)");

  if (auto v = output_s.get("dir")) {
    std::filesystem::path dir = *v;
    config.out_dir = dir.is_relative() ? base_dir / dir : dir;
  } else {
    config.out_dir = base_dir / "out";
  }

  model_s.reject_unknown();
  inputs_s.reject_unknown();
  corr_s.reject_unknown();
  method_s.reject_unknown();
  weights_s.reject_unknown();
  run_s.reject_unknown();
  output_s.reject_unknown();
  return config;
}

AnalysisConfig AnalysisConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_text(text.str(), path.has_parent_path()
                                    ? path.parent_path()
                                    : std::filesystem::path("."));
}

void apply_overrides(AnalysisConfig& config, const ConfigOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.strict) config.strict = *overrides.strict;
  if (overrides.dual) config.dual = *overrides.dual;
  if (overrides.weights) {
    const std::string& w = *overrides.weights;
    int dim = config.inputs.dim();
    if (w == "uniform") {
      config.weights = WeightFamily::uniform(dim);
    } else if (w == "mobius") {
      config.weights = WeightFamily::mobius(dim);
    } else if (w == "shapley") {
      config.weights = WeightFamily::shapley(dim);
    } else {
      if (!std::filesystem::exists(w))
        throw ConfigError("--weights: no such family and no such file: " + w);
      config.weights = load_weight_family(w, dim);
    }
  }
}

}  // namespace fsens
