#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsens/lattice_map.hpp"
#include "fsens/weights.hpp"

namespace fsens {

// All weighted effects of one map under one weight family, with provenance.
struct EffectTable {
  LatticeMap effects;
  std::string weights_id;
  std::string source_id;
  int dim() const { return effects.dim(); }
};

// Weighted factorial effect of B, averaged form:
//   I(B) = sum over A <= D\B of p_B(A) * delta(tau, B, A).
// Preferred for families whose support is small; O(2^d) per call in general.
double weighted_effect(const LatticeMap& tau, SubsetMask B,
                       const WeightFamily& w);

// Same quantity as a signed single pass over the lattice:
//   I(B) = sum over A <= D of (-1)^(|B\A|) p_B(A\B) * tau(A).
double weighted_effect_linear(const LatticeMap& tau, SubsetMask B,
                              const WeightFamily& w);

// Raw variants over an arbitrary weight callable p(b_bits, a_bits) -> double.
// No validation is applied; meant for weight perturbation studies.
template <typename WeightFn>
double weighted_effect_raw(const LatticeMap& tau, SubsetMask B, WeightFn&& p) {
  const std::uint32_t comp = B.complement().bits();
  double sum = 0.0;
  for_each_submask(comp, [&](std::uint32_t a) {
    double w = p(B.bits(), a);
    if (w != 0.0) sum += w * delta(tau, B, SubsetMask(tau.dim(), a));
  });
  return sum;
}

template <typename WeightFn>
double weighted_effect_linear_raw(const LatticeMap& tau, SubsetMask B,
                                  WeightFn&& p) {
  const std::uint32_t b = B.bits();
  const std::uint32_t n = static_cast<std::uint32_t>(tau.size());
  double sum = 0.0;
  for (std::uint32_t a = 0; a < n; ++a) {
    double w = p(b, a & ~b);
    if (w == 0.0) continue;
    double term = w * tau.value(a);
    sum += (std::popcount(b & ~a) & 1) ? -term : term;
  }
  return sum;
}

// All 2^d effects via the linear form; parallelized over B for larger d.
EffectTable effect_table(const LatticeMap& tau, const WeightFamily& w,
                         std::string source_id = "");

// Effects of the dual map: effect_table(dual(tau), w).
EffectTable dual_effect_table(const LatticeMap& tau, const WeightFamily& w,
                              std::string source_id = "");

// Coefficients c with I(B) = sum_S c[S] * tau(S). With from_dual set, the
// returned coefficients still act on the primal tau even though the effect
// is the one computed from the dual map.
std::vector<double> effect_coefficients(SubsetMask B, const WeightFamily& w,
                                        bool from_dual = false);

// Standard error of one effect from per-subset standard errors, assuming the
// subset estimates are independent (the default, non-shared sampling mode).
double effect_std_error(const std::vector<double>& subset_std_errors,
                        SubsetMask B, const WeightFamily& w,
                        bool from_dual = false);

struct ResidualReport {
  bool pass = false;
  double max_residual = 0.0;
  std::uint32_t argmax = 0;
  double tol = 0.0;
};

// Checks sum over B <= A of I(B) == tau(A) for every A; an identity exactly
// when the table came from the mobius family.
ResidualReport verify_sobol_decomposition(const LatticeMap& tau,
                                          const EffectTable& table,
                                          double tol = 1e-10);

// Checks sum over singletons of I({i}) == tau(D); requires tau(empty) == 0.
ResidualReport verify_shapley_sum(const LatticeMap& tau,
                                  const EffectTable& table,
                                  double tol = 1e-10);

}  // namespace fsens
