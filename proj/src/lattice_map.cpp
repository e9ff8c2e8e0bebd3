#include "fsens/lattice_map.hpp"

#include <stdexcept>
#include <string>

namespace fsens {

LatticeMap::LatticeMap(int dim, double fill) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("LatticeMap: dim must be in [1, " +
                                std::to_string(kMaxDim) + "]");
  values_.assign(std::size_t{1} << dim, fill);
}

LatticeMap::LatticeMap(int dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("LatticeMap: dim must be in [1, " +
                                std::to_string(kMaxDim) + "]");
  if (values_.size() != (std::size_t{1} << dim))
    throw std::invalid_argument("LatticeMap: need exactly 2^dim values, got " +
                                std::to_string(values_.size()));
}

std::uint32_t LatticeMap::check(SubsetMask s) const {
  if (s.dim() != dim_)
    throw std::invalid_argument("LatticeMap: mask dim " +
                                std::to_string(s.dim()) +
                                " does not match map dim " +
                                std::to_string(dim_));
  return s.bits();
}

MapAxiomReport check_map_axioms(const LatticeMap& tau, double tol) {
  MapAxiomReport rep;
  rep.empty_value = tau.value(0);
  rep.min_value = tau.value(0);
  rep.min_subset = 0;
  for (std::uint32_t s = 0; s < tau.size(); ++s) {
    if (tau.value(s) < rep.min_value) {
      rep.min_value = tau.value(s);
      rep.min_subset = s;
    }
  }
  rep.pass = rep.empty_value == 0.0 && rep.min_value >= -tol;
  return rep;
}

double delta(const LatticeMap& tau, SubsetMask B, SubsetMask A) {
  if (B.dim() != tau.dim() || A.dim() != tau.dim())
    throw std::invalid_argument("delta: mask dim does not match map dim");
  if (!A.disjoint_from(B))
    throw std::invalid_argument("delta: A and B overlap (A=" + A.label() +
                                ", B=" + B.label() + ")");
  const int nb = B.count();
  double sum = 0.0;
  for_each_submask(B.bits(), [&](std::uint32_t t) {
    double term = tau.value(A.bits() | t);
    sum += ((nb - std::popcount(t)) & 1) ? -term : term;
  });
  return sum;
}

LatticeMap mobius_transform(const LatticeMap& tau) {
  LatticeMap out = tau;
  const std::uint32_t n = static_cast<std::uint32_t>(out.size());
  for (int j = 0; j < out.dim(); ++j) {
    const std::uint32_t bit = std::uint32_t{1} << j;
    for (std::uint32_t s = 0; s < n; ++s)
      if (s & bit) out.value(s) -= out.value(s ^ bit);
  }
  return out;
}

LatticeMap mobius_inverse(const LatticeMap& effects) {
  LatticeMap out = effects;
  const std::uint32_t n = static_cast<std::uint32_t>(out.size());
  for (int j = 0; j < out.dim(); ++j) {
    const std::uint32_t bit = std::uint32_t{1} << j;
    for (std::uint32_t s = 0; s < n; ++s)
      if (s & bit) out.value(s) += out.value(s ^ bit);
  }
  return out;
}

LatticeMap dual(const LatticeMap& tau) {
  LatticeMap out(tau.dim());
  const std::uint32_t full = static_cast<std::uint32_t>(tau.size()) - 1;
  const double total = tau.value(full);
  for (std::uint32_t s = 0; s <= full; ++s)
    out.value(s) = total - tau.value(full ^ s);
  return out;
}

double conditional_effect(const LatticeMap& tau, SubsetMask B, SubsetMask A) {
  if (B.dim() != tau.dim() || A.dim() != tau.dim())
    throw std::invalid_argument(
        "conditional_effect: mask dim does not match map dim");
  return tau.value((B - A).bits() | A.bits()) - tau[A];
}

}  // namespace fsens
