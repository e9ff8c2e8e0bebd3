#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsens/divergences.hpp"
#include "fsens/input_model.hpp"
#include "fsens/lattice_map.hpp"
#include "fsens/models.hpp"

namespace fsens {

enum class EstimatorKind { pick_freeze, double_loop_contrast, exact };

// One estimated lattice entry with its uncertainty and seed provenance.
struct EstimateReport {
  SubsetMask subset = SubsetMask::empty(1);
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t n_inner = 0;  // only for the double-loop estimator
  std::uint64_t seed = 0;
  EstimatorKind kind = EstimatorKind::exact;
};

// Raised when a model evaluation produced a non-finite value; estimates are
// aborted rather than silently dropping rows.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(SubsetMask subset, std::size_t row, const std::string& what)
      : std::runtime_error("subset " + subset.label() + ", row " +
                           std::to_string(row) + ": " + what),
        subset_bits(subset.bits()),
        row(row) {}
  std::uint32_t subset_bits;
  std::size_t row;
};

// Pick-freeze estimate of tau(A) = E psi(f(X), f(X^{\A})).
// The empty subset is exact zero by definition and is never sampled.
EstimateReport estimate_tau(const Model& model, const InputDistribution& dist,
                            const Divergence& div, SubsetMask a, std::size_t n,
                            std::uint64_t seed);

// Double-loop estimate of the contrast map: for each of n_outer conditioning
// draws, n_inner conditional replicates feed the empirical minimizer and the
// minimized contrast is averaged over the outer loop.
EstimateReport estimate_tau_contrast(const Model& model,
                                     const InputDistribution& dist,
                                     const Contrast& contrast, SubsetMask a,
                                     std::size_t n_outer, std::size_t n_inner,
                                     std::uint64_t seed);

// Estimation method selector: one divergence (pick-freeze) or one contrast
// (double loop).
struct EstimationMethod {
  bool pick_freeze = true;
  Divergence divergence;
  Contrast contrast;

  static EstimationMethod with_divergence(Divergence d) {
    return {true, d, Contrast::mean()};
  }
  static EstimationMethod with_contrast(Contrast c) {
    return {false, Divergence::squared_half(), c};
  }
  std::string name() const {
    return pick_freeze ? divergence.name() : contrast.name();
  }
};

struct EstimationOptions {
  std::size_t n = 10000;    // per-subset sample size (outer loop size)
  std::size_t n_inner = 0;  // 0: use max(32, floor(sqrt(n)))
  bool shared_base = false; // reuse one base sample across subsets
  bool parallel = true;
  int dim_limit = kDefaultDimLimit;
};

// Even split of a total evaluation budget across the 2^d - 1 sampled subsets.
std::size_t split_budget(std::size_t total, int dim);

std::size_t default_inner_size(std::size_t n_outer);

struct SubsetFailure {
  SubsetMask subset;
  std::string message;
};

struct SensitivityMapEstimate {
  LatticeMap map;                       // NaN on failed subsets
  std::vector<EstimateReport> reports;  // indexed by subset bits
  std::vector<SubsetFailure> failures;

  bool ok() const { return failures.empty(); }
  std::vector<double> std_errors() const;
};

// Estimates every subset of the lattice; per-subset seeds derive from the
// master seed and the subset index, so scheduling cannot change results.
SensitivityMapEstimate estimate_sensitivity_map(const Model& model,
                                                const InputDistribution& dist,
                                                const EstimationMethod& method,
                                                const EstimationOptions& options,
                                                std::uint64_t seed);

class NoClosedForm : public std::runtime_error {
 public:
  explicit NoClosedForm(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form tau(A) = E var(f(X) | X_{D\A}) for built-in models under
// independent inputs and the squared_half divergence; the oracle side of the
// acceptance checks. Throws NoClosedForm when not registered.
double exact_tau(const Model& model, const InputDistribution& dist,
                 const Divergence& div, SubsetMask a);
bool has_exact_tau(const Model& model, const InputDistribution& dist,
                   const Divergence& div);
LatticeMap exact_sensitivity_map(const Model& model,
                                 const InputDistribution& dist,
                                 const Divergence& div);

}  // namespace fsens
