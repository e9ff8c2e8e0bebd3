#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fsens/subset_mask.hpp"

namespace fsens {

// Default tolerances for comparing lattice quantities. Alternating sums
// cancel, so both a relative bound and an absolute floor are needed.
inline constexpr double kRelTol = 1e-10;
inline constexpr double kAbsTol = 1e-12;

inline bool nearly_equal(double a, double b, double rel = kRelTol,
                         double abs = kAbsTol) {
  double diff = a > b ? a - b : b - a;
  if (diff <= abs) return true;
  double scale = std::max(a > 0 ? a : -a, b > 0 ? b : -b);
  return diff <= rel * scale;
}

// A real-valued map on the full powerset of {1,...,d}, stored densely and
// indexed by SubsetMask bits. Holds sensitivity maps, their duals, and
// effect tables alike; treat instances as immutable once filled.
class LatticeMap {
 public:
  explicit LatticeMap(int dim, double fill = 0.0);
  LatticeMap(int dim, std::vector<double> values);

  int dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }

  double operator[](SubsetMask s) const { return values_[check(s)]; }
  double& operator[](SubsetMask s) { return values_[check(s)]; }
  double value(std::uint32_t bits) const { return values_[bits]; }
  double& value(std::uint32_t bits) { return values_[bits]; }

  const std::vector<double>& values() const { return values_; }

 private:
  std::uint32_t check(SubsetMask s) const;

  int dim_;
  std::vector<double> values_;
};

// Sensitivity-map axioms that are checkable on a materialized map:
// value at the empty set is zero and no value is negative.
struct MapAxiomReport {
  bool pass = false;
  double empty_value = 0.0;
  double min_value = 0.0;
  std::uint32_t min_subset = 0;
};
MapAxiomReport check_map_axioms(const LatticeMap& tau, double tol = 0.0);

// Iterated difference operator over the lattice:
//   delta(tau, B, A) = sum over A <= C <= A|B of (-1)^(|B| - |C\A|) tau(C).
// Requires A and B disjoint.
double delta(const LatticeMap& tau, SubsetMask B, SubsetMask A);

// I(B) = sum over A <= B of (-1)^(|B\A|) tau(A), computed as an in-place
// bit-plane sweep in O(d 2^d).
LatticeMap mobius_transform(const LatticeMap& tau);

// tau(B) = sum over A <= B of I(A); inverse of mobius_transform.
LatticeMap mobius_inverse(const LatticeMap& effects);

// tau*(A) = tau(D) - tau(D\A).
LatticeMap dual(const LatticeMap& tau);

// Effect of B given A, overlap allowed:
//   tau(B|A) = tau((B\A) | A) - tau(A).
double conditional_effect(const LatticeMap& tau, SubsetMask B, SubsetMask A);

}  // namespace fsens
