#include "fsens/estimators.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace fsens {

namespace {

constexpr std::uint64_t kSubsetSalt = 0x5b5e7;

struct MeanStdError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStdError reduce(const std::vector<double>& values) {
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

double evaluate_checked(const Model& model, std::span<const double> x,
                        SubsetMask subset, std::size_t row) {
  double y;
  try {
    y = model(x);
  } catch (const std::domain_error& e) {
    throw EstimationError(subset, row, e.what());
  }
  return y;
}

EstimateReport exact_zero_report(SubsetMask a, std::uint64_t seed) {
  EstimateReport rep{a};
  rep.seed = seed;
  rep.kind = EstimatorKind::exact;
  return rep;
}

}  // namespace

EstimateReport estimate_tau(const Model& model, const InputDistribution& dist,
                            const Divergence& div, SubsetMask a, std::size_t n,
                            std::uint64_t seed) {
  if (model.dim() != dist.dim() || a.dim() != dist.dim())
    throw std::invalid_argument("estimate_tau: dimension mismatch");
  if (a.is_empty()) return exact_zero_report(a, seed);
  if (n < 2) throw std::invalid_argument("estimate_tau: need n >= 2");

  PairedSample ps = dist.paired_sample(a, n, seed);
  std::vector<double> values(n);
  for (std::size_t r = 0; r < n; ++r) {
    double y = evaluate_checked(model, ps.x.row(r), a, r);
    double y_re = evaluate_checked(model, ps.x_resampled.row(r), a, r);
    values[r] = div(y, y_re);
  }
  MeanStdError ms = reduce(values);

  EstimateReport rep{a};
  rep.estimate = ms.mean;
  rep.std_error = ms.std_error;
  rep.n = n;
  rep.seed = seed;
  rep.kind = EstimatorKind::pick_freeze;
  return rep;
}

std::size_t default_inner_size(std::size_t n_outer) {
  auto root = static_cast<std::size_t>(std::floor(std::sqrt(
      static_cast<double>(n_outer))));
  return std::max<std::size_t>(32, root);
}

EstimateReport estimate_tau_contrast(const Model& model,
                                     const InputDistribution& dist,
                                     const Contrast& contrast, SubsetMask a,
                                     std::size_t n_outer, std::size_t n_inner,
                                     std::uint64_t seed) {
  if (model.dim() != dist.dim() || a.dim() != dist.dim())
    throw std::invalid_argument("estimate_tau_contrast: dimension mismatch");
  if (a.is_empty()) return exact_zero_report(a, seed);
  if (n_outer < 2 || n_inner < 2)
    throw std::invalid_argument(
        "estimate_tau_contrast: need n_outer >= 2 and n_inner >= 2");

  Matrix x = dist.sample(n_outer, seed);
  ConditionalSampler sampler = dist.conditional_sampler(a);

  std::vector<double> outer_values(n_outer);
  std::vector<double> inner_y(n_inner);
  std::vector<double> row_buf(dist.dim());
  for (std::size_t r = 0; r < n_outer; ++r) {
    ConditionalSampler::Context ctx = sampler.condition(x.row(r));
    RngStream stream(seed, stream_tag::inner, r);
    auto base_row = x.row(r);
    for (std::size_t j = 0; j < n_inner; ++j) {
      std::copy(base_row.begin(), base_row.end(), row_buf.begin());
      sampler.draw(ctx, stream, row_buf);
      inner_y[j] = evaluate_checked(model, row_buf, a, r);
    }
    double theta = empirical_minimizer(contrast, inner_y);
    outer_values[r] = empirical_contrast_value(contrast, inner_y, theta);
  }
  MeanStdError ms = reduce(outer_values);

  EstimateReport rep{a};
  rep.estimate = ms.mean;
  rep.std_error = ms.std_error;
  rep.n = n_outer;
  rep.n_inner = n_inner;
  rep.seed = seed;
  rep.kind = EstimatorKind::double_loop_contrast;
  return rep;
}

std::size_t split_budget(std::size_t total, int dim) {
  std::size_t subsets = (std::size_t{1} << dim) - 1;
  return std::max<std::size_t>(2, total / subsets);
}

std::vector<double> SensitivityMapEstimate::std_errors() const {
  std::vector<double> out(reports.size(), 0.0);
  for (std::size_t s = 0; s < reports.size(); ++s)
    out[s] = reports[s].std_error;
  return out;
}

SensitivityMapEstimate estimate_sensitivity_map(
    const Model& model, const InputDistribution& dist,
    const EstimationMethod& method, const EstimationOptions& options,
    std::uint64_t seed) {
  const int d = dist.dim();
  if (model.dim() != d)
    throw std::invalid_argument("estimate_sensitivity_map: dim mismatch");
  if (d > options.dim_limit)
    throw std::invalid_argument(
        "estimate_sensitivity_map: d=" + std::to_string(d) +
        " exceeds the configured limit " + std::to_string(options.dim_limit));

  const std::uint32_t count = std::uint32_t{1} << d;
  const std::size_t n_inner =
      options.n_inner > 0 ? options.n_inner : default_inner_size(options.n);

  SensitivityMapEstimate result{
      LatticeMap(d, std::numeric_limits<double>::quiet_NaN()),
      std::vector<EstimateReport>(count),
      {}};

  // Shared-base mode: one X matrix and its evaluations reused by every
  // subset; halves the model calls, correlates estimates across subsets.
  Matrix shared_x;
  std::vector<double> shared_y;
  if (options.shared_base && method.pick_freeze) {
    std::uint64_t base_seed = derive_seed(seed, kSubsetSalt, 0);
    shared_x = dist.sample(options.n, base_seed);
    shared_y.resize(options.n);
    try {
      for (std::size_t r = 0; r < options.n; ++r)
        shared_y[r] = evaluate_checked(model, shared_x.row(r),
                                       SubsetMask::empty(d), r);
    } catch (const EstimationError& e) {
      // The base sample feeds every subset, so all of them fail at once.
      for (std::uint32_t bits = 1; bits < count; ++bits)
        result.failures.push_back({SubsetMask(d, bits), e.what()});
      result.reports[0] = exact_zero_report(SubsetMask::empty(d),
                                            derive_seed(seed, kSubsetSalt, 0));
      result.map.value(0) = 0.0;
      return result;
    }
  }

  auto estimate_one = [&](std::uint32_t bits) -> EstimateReport {
    SubsetMask a(d, bits);
    std::uint64_t subset_seed = derive_seed(seed, kSubsetSalt, bits);
    if (bits == 0) return exact_zero_report(a, subset_seed);
    if (!method.pick_freeze)
      return estimate_tau_contrast(model, dist, method.contrast, a, options.n,
                                   n_inner, subset_seed);
    if (!options.shared_base)
      return estimate_tau(model, dist, method.divergence, a, options.n,
                          subset_seed);

    Matrix re = dist.resample_conditional(shared_x, a, subset_seed);
    std::vector<double> values(options.n);
    for (std::size_t r = 0; r < options.n; ++r)
      values[r] =
          method.divergence(shared_y[r], evaluate_checked(model, re.row(r), a, r));
    MeanStdError ms = reduce(values);
    EstimateReport rep{a};
    rep.estimate = ms.mean;
    rep.std_error = ms.std_error;
    rep.n = options.n;
    rep.seed = subset_seed;
    rep.kind = EstimatorKind::pick_freeze;
    return rep;
  };

  // Failed subsets keep a NaN map entry and land in the failure list.
  auto run_range = [&](std::uint32_t lo,
                       std::uint32_t hi) -> std::vector<SubsetFailure> {
    std::vector<SubsetFailure> fails;
    for (std::uint32_t bits = lo; bits < hi; ++bits) {
      try {
        result.reports[bits] = estimate_one(bits);
        result.map.value(bits) = result.reports[bits].estimate;
      } catch (const EstimationError& e) {
        result.reports[bits] = EstimateReport{SubsetMask(d, bits)};
        result.reports[bits].seed = derive_seed(seed, kSubsetSalt, bits);
        fails.push_back({SubsetMask(d, bits), e.what()});
      }
    }
    return fails;
  };

  unsigned workers = std::thread::hardware_concurrency();
  if (options.parallel && workers > 1 && count > 2) {
    std::vector<std::future<std::vector<SubsetFailure>>> futures;
    const std::uint32_t chunks = std::min<std::uint32_t>(workers, count);
    const std::uint32_t chunk = (count + chunks - 1) / chunks;
    for (std::uint32_t lo = 0; lo < count; lo += chunk)
      futures.push_back(std::async(std::launch::async, run_range, lo,
                                   std::min(lo + chunk, count)));
    for (auto& f : futures)
      for (SubsetFailure& fail : f.get())
        result.failures.push_back(std::move(fail));
  } else {
    result.failures = run_range(0, count);
  }

  return result;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

namespace {

bool is_pi_uniform(const Marginal& m) {
  constexpr double pi = 3.14159265358979323846;
  return m.kind() == Marginal::Kind::uniform &&
         std::fabs(m.param_a() + pi) < 1e-9 && std::fabs(m.param_b() - pi) < 1e-9;
}

// Unnormalized Sobol components of the Ishigami function on uniform(-pi,pi)^3:
// only V{1}, V{2} and V{1,3} are nonzero.
struct IshigamiComponents {
  double v1, v2, v13;
  double total() const { return v1 + v2 + v13; }
};

IshigamiComponents ishigami_components(double a, double b) {
  constexpr double pi = 3.14159265358979323846;
  const double pi4 = pi * pi * pi * pi;
  const double pi8 = pi4 * pi4;
  IshigamiComponents c{};
  c.v1 = b * pi4 / 5.0 + b * b * pi8 / 50.0 + 0.5;
  c.v2 = a * a / 8.0;
  c.v13 = 8.0 * b * b * pi8 / 225.0;
  return c;
}

}  // namespace

bool has_exact_tau(const Model& model, const InputDistribution& dist,
                   const Divergence& div) {
  if (div.kind != DivergenceKind::squared_half) return false;
  if (dist.dependence() != Dependence::independent) return false;
  switch (model.kind()) {
    case ModelKind::linear:
    case ModelKind::product:
    case ModelKind::square_plus:
      return true;
    case ModelKind::ishigami:
      return is_pi_uniform(dist.marginal(0)) && is_pi_uniform(dist.marginal(1)) &&
             is_pi_uniform(dist.marginal(2));
    case ModelKind::polynomial:
      return false;
  }
  return false;
}

double exact_tau(const Model& model, const InputDistribution& dist,
                 const Divergence& div, SubsetMask a) {
  if (a.dim() != dist.dim() || model.dim() != dist.dim())
    throw std::invalid_argument("exact_tau: dimension mismatch");
  if (!has_exact_tau(model, dist, div))
    throw NoClosedForm("exact_tau: no closed form registered for " +
                       model.describe() + " under " + dist.describe() +
                       " with " + div.name());
  if (a.is_empty()) return 0.0;

  switch (model.kind()) {
    case ModelKind::linear: {
      double sum = 0.0;
      for (int i = 1; i <= model.dim(); ++i)
        if (a.contains(i))
          sum += model.coefficients()[i - 1] * model.coefficients()[i - 1] *
                 dist.marginal(i - 1).variance();
      return sum;
    }
    case ModelKind::product: {
      // E var(prod | fixed block) with mutually independent factors.
      double fixed_m2 = 1.0, free_m2 = 1.0, free_mean_sq = 1.0;
      for (int i = 1; i <= model.dim(); ++i) {
        const Marginal& m = dist.marginal(i - 1);
        if (a.contains(i)) {
          free_m2 *= m.moment(2);
          free_mean_sq *= m.mean() * m.mean();
        } else {
          fixed_m2 *= m.moment(2);
        }
      }
      return fixed_m2 * (free_m2 - free_mean_sq);
    }
    case ModelKind::square_plus: {
      const Marginal& m1 = dist.marginal(0);
      const Marginal& m2 = dist.marginal(1);
      double var_sq = m1.moment(4) - m1.moment(2) * m1.moment(2);
      double sum = 0.0;
      if (a.contains(1)) sum += var_sq;
      if (a.contains(2)) sum += m2.variance();
      return sum;
    }
    case ModelKind::ishigami: {
      IshigamiComponents c =
          ishigami_components(model.ishigami_a(), model.ishigami_b());
      // tau(A) = total - sum of components supported inside D \ A.
      double tau = c.total();
      if (!a.contains(1)) tau -= c.v1;
      if (!a.contains(2)) tau -= c.v2;
      if (!a.contains(1) && !a.contains(3)) tau -= c.v13;
      return tau;
    }
    case ModelKind::polynomial:
      break;
  }
  throw NoClosedForm("exact_tau: unreachable model kind");
}

LatticeMap exact_sensitivity_map(const Model& model,
                                 const InputDistribution& dist,
                                 const Divergence& div) {
  LatticeMap map(dist.dim());
  for (std::uint32_t bits = 0; bits < map.size(); ++bits)
    map.value(bits) = exact_tau(model, dist, div, SubsetMask(dist.dim(), bits));
  return map;
}

}  // namespace fsens
