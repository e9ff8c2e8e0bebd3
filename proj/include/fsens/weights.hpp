#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsens/subset_mask.hpp"

namespace fsens {

enum class WeightKind { uniform, mobius, shapley, custom };

struct WeightEntry {
  std::uint32_t b_bits = 0;
  std::uint32_t a_bits = 0;
  double weight = 0.0;
};

// A family of weight functions p_B, one per subset B of the inputs: p_B is a
// probability distribution over the subsets of the complement of B, extended
// by zero elsewhere. The three named families come from closed forms and use
// no storage; custom families materialize their entries.
class WeightFamily {
 public:
  // p_B(A) = 1 / 2^(d - |B|): plain factorial-effect averaging.
  static WeightFamily uniform(int dim);
  // p_B(A) = 1 if A is empty, else 0: yields the Mobius transform.
  static WeightFamily mobius(int dim);
  // p_B(A) = 1 / ((|D\B| + 1) * C(|D\B|, |A|)): yields Shapley values.
  static WeightFamily shapley(int dim);
  // Materialized from explicit entries; throws unless the result validates.
  static WeightFamily custom(int dim, const std::vector<WeightEntry>& entries,
                             std::string name = "custom");
  // As above but skips validation; rejected by effect computations until
  // validated. Intended for negative tests and weight experiments.
  static WeightFamily custom_unchecked(int dim,
                                       const std::vector<WeightEntry>& entries,
                                       std::string name = "custom");

  int dim() const { return dim_; }
  WeightKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool validated() const { return validated_; }

  // p_B(A); zero whenever A is not contained in the complement of B.
  double weight(SubsetMask B, SubsetMask A) const;
  double weight_bits(std::uint32_t b_bits, std::uint32_t a_bits) const;

 private:
  WeightFamily(int dim, WeightKind kind, std::string name);

  int dim_;
  WeightKind kind_;
  std::string name_;
  bool validated_ = false;
  std::unordered_map<std::uint64_t, double> table_;  // custom only
  std::vector<double> binomial_;  // C(d - |B|, |A|) row cache for shapley
};

// Per-family normalization report: every p_B must be nonnegative and sum to
// one over the subsets of the complement of B.
struct WeightValidation {
  bool pass = false;
  double max_deviation = 0.0;       // worst |sum_A p_B(A) - 1|
  std::uint32_t worst_b = 0;
  std::size_t negative_count = 0;
  std::uint32_t first_negative_b = 0;
  std::uint32_t first_negative_a = 0;
  double tol = 0.0;
};
WeightValidation validate(const WeightFamily& w, double tol = 1e-12);

// The three conditions that are necessary and sufficient for the singleton
// effects to sum to tau(D) for every sensitivity map:
//   sum_i p_i(empty) = 1,
//   sum_i (-1)^(1 - |A & {i}|) p_i(A \ {i}) = 0 for A not in {empty, D},
//   sum_i p_i(D \ {i}) = 1.
struct ShapleyConditionReport {
  bool pass = false;
  double empty_sum = 0.0;
  double full_sum = 0.0;
  double max_middle = 0.0;
  std::uint32_t argmax_middle = 0;
  double tol = 0.0;
};
ShapleyConditionReport check_shapley_condition(const WeightFamily& w,
                                               double tol = 1e-12);

// Plain-text custom family: one "{B} {A} weight" row per line, sets written
// with 1-based indices ("{1,3}", empty set "{}"), '#' starts a comment.
WeightFamily load_weight_family(const std::filesystem::path& path, int dim);

}  // namespace fsens
