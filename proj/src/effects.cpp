#include "fsens/effects.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace fsens {

namespace {

void require_usable(const LatticeMap& tau, SubsetMask B,
                    const WeightFamily& w) {
  if (B.dim() != tau.dim() || w.dim() != tau.dim())
    throw std::invalid_argument("effects: dimension mismatch between map (" +
                                std::to_string(tau.dim()) + "), subset and " +
                                "weight family (" + std::to_string(w.dim()) +
                                ")");
  if (!w.validated())
    throw std::invalid_argument("effects: weight family \"" + w.name() +
                                "\" has not been validated");
}

}  // namespace

double weighted_effect(const LatticeMap& tau, SubsetMask B,
                       const WeightFamily& w) {
  require_usable(tau, B, w);
  return weighted_effect_raw(
      tau, B, [&](std::uint32_t b, std::uint32_t a) { return w.weight_bits(b, a); });
}

double weighted_effect_linear(const LatticeMap& tau, SubsetMask B,
                              const WeightFamily& w) {
  require_usable(tau, B, w);
  return weighted_effect_linear_raw(
      tau, B, [&](std::uint32_t b, std::uint32_t a) { return w.weight_bits(b, a); });
}

EffectTable effect_table(const LatticeMap& tau, const WeightFamily& w,
                         std::string source_id) {
  require_usable(tau, SubsetMask::empty(tau.dim()), w);
  const int d = tau.dim();
  LatticeMap effects(d);
  const std::uint32_t n = static_cast<std::uint32_t>(tau.size());

  auto compute_range = [&](std::uint32_t lo, std::uint32_t hi) {
    for (std::uint32_t b = lo; b < hi; ++b)
      effects.value(b) = weighted_effect_linear_raw(
          tau, SubsetMask(d, b),
          [&](std::uint32_t bb, std::uint32_t aa) { return w.weight_bits(bb, aa); });
  };

  unsigned workers = std::thread::hardware_concurrency();
  if (d >= 11 && workers > 1) {
    const std::uint32_t chunk = (n + workers - 1) / workers;
    std::vector<std::future<void>> futures;
    for (std::uint32_t lo = 0; lo < n; lo += chunk)
      futures.push_back(std::async(std::launch::async, compute_range, lo,
                                   std::min(lo + chunk, n)));
    for (auto& f : futures) f.get();
  } else {
    compute_range(0, n);
  }

  return EffectTable{std::move(effects), w.name(), std::move(source_id)};
}

EffectTable dual_effect_table(const LatticeMap& tau, const WeightFamily& w,
                              std::string source_id) {
  EffectTable table = effect_table(dual(tau), w, std::move(source_id));
  table.source_id = "dual(" + table.source_id + ")";
  return table;
}

std::vector<double> effect_coefficients(SubsetMask B, const WeightFamily& w,
                                        bool from_dual) {
  if (B.dim() != w.dim())
    throw std::invalid_argument("effect_coefficients: dimension mismatch");
  const int d = w.dim();
  const std::uint32_t n = std::uint32_t{1} << d;
  const std::uint32_t full = n - 1;
  const std::uint32_t b = B.bits();

  std::vector<double> coef(n, 0.0);
  double total = 0.0;
  for (std::uint32_t a = 0; a < n; ++a) {
    double c = w.weight_bits(b, a & ~b);
    if (std::popcount(b & ~a) & 1) c = -c;
    if (!from_dual) {
      coef[a] = c;
    } else {
      // I*(B) = sum_A c_A (tau(D) - tau(D\A))
      total += c;
      coef[full ^ a] -= c;
    }
  }
  if (from_dual) coef[full] += total;
  return coef;
}

double effect_std_error(const std::vector<double>& subset_std_errors,
                        SubsetMask B, const WeightFamily& w, bool from_dual) {
  std::vector<double> coef = effect_coefficients(B, w, from_dual);
  if (subset_std_errors.size() != coef.size())
    throw std::invalid_argument(
        "effect_std_error: std-error vector has wrong length");
  double var = 0.0;
  for (std::size_t s = 0; s < coef.size(); ++s)
    var += coef[s] * coef[s] * subset_std_errors[s] * subset_std_errors[s];
  return std::sqrt(var);
}

ResidualReport verify_sobol_decomposition(const LatticeMap& tau,
                                          const EffectTable& table,
                                          double tol) {
  if (table.dim() != tau.dim())
    throw std::invalid_argument("verify_sobol_decomposition: dim mismatch");
  ResidualReport rep;
  rep.tol = tol;
  LatticeMap partial_sums = mobius_inverse(table.effects);
  for (std::uint32_t a = 0; a < tau.size(); ++a) {
    double res = std::fabs(partial_sums.value(a) - tau.value(a));
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.argmax = a;
    }
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

ResidualReport verify_shapley_sum(const LatticeMap& tau,
                                  const EffectTable& table, double tol) {
  if (table.dim() != tau.dim())
    throw std::invalid_argument("verify_shapley_sum: dim mismatch");
  if (tau.value(0) != 0.0)
    throw std::invalid_argument(
        "verify_shapley_sum: tau(empty) must be zero, got " +
        std::to_string(tau.value(0)));
  ResidualReport rep;
  rep.tol = tol;
  double sum = 0.0;
  for (int i = 0; i < tau.dim(); ++i)
    sum += table.effects.value(std::uint32_t{1} << i);
  rep.max_residual = std::fabs(sum - tau.value(tau.size() - 1));
  rep.argmax = static_cast<std::uint32_t>(tau.size() - 1);
  rep.pass = rep.max_residual <= tol;
  return rep;
}

}  // namespace fsens
