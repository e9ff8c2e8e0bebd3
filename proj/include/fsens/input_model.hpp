#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsens/rng.hpp"
#include "fsens/subset_mask.hpp"

namespace fsens {

// Row-major dense matrix; one row per draw, one column per input.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// One-dimensional input law.
class Marginal {
 public:
  enum class Kind { uniform, normal, discrete };

  static Marginal uniform(double a, double b);
  static Marginal normal(double mu, double sigma);
  static Marginal discrete(std::vector<double> points,
                           std::vector<double> probabilities);

  Kind kind() const { return kind_; }
  bool continuous() const { return kind_ != Kind::discrete; }

  double quantile(double u) const;  // u in (0,1)
  double cdf(double x) const;       // continuous kinds only

  // Transport to/from the standard normal scale; exact for the normal kind.
  double from_standard_normal(double z) const;
  double to_standard_normal(double x) const;

  double mean() const { return moment(1); }
  double variance() const;
  double moment(int k) const;  // raw moment, k in 1..4

  double param_a() const { return a_; }
  double param_b() const { return b_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& probabilities() const { return probs_; }

  std::string describe() const;

 private:
  Marginal(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_ = 0.0, b_ = 1.0;  // uniform bounds, or normal (mu, sigma)
  std::vector<double> points_, probs_, cumulative_;
};

enum class Dependence { independent, gaussian_copula };

// Pick-freeze pair: x_resampled refreshes the columns in `mask` from the
// conditional law given the others; the remaining columns match x exactly.
struct PairedSample {
  Matrix x;
  Matrix x_resampled;
  SubsetMask mask;
  std::uint64_t seed = 0;
};

class ConditionalSampler;

// Joint input law: per-input marginals, coupled either independently or by a
// Gaussian copula with correlation matrix R (which requires every marginal
// to be continuous, so latent coordinates can be recovered exactly).
class InputDistribution {
 public:
  static InputDistribution independent(std::vector<Marginal> marginals);
  static InputDistribution gaussian_copula(std::vector<Marginal> marginals,
                                           std::vector<double> correlation);

  int dim() const { return static_cast<int>(marginals_.size()); }
  Dependence dependence() const { return dependence_; }
  const Marginal& marginal(int column) const { return marginals_[column]; }
  const std::vector<double>& correlation() const { return correlation_; }

  // n rows of X; deterministic in (n, seed), row-parallel reproducible.
  Matrix sample(std::size_t n, std::uint64_t seed) const;

  // Rows satisfying the pick-freeze conditions against x: columns outside
  // `a` are copied bit-for-bit, columns inside `a` are drawn from the
  // conditional law given the copied ones.
  Matrix resample_conditional(const Matrix& x, SubsetMask a,
                              std::uint64_t seed) const;

  PairedSample paired_sample(SubsetMask a, std::size_t n,
                             std::uint64_t seed) const;

  ConditionalSampler conditional_sampler(SubsetMask a) const;

  std::string describe() const;

 private:
  InputDistribution(std::vector<Marginal> marginals, Dependence dep,
                    std::vector<double> correlation);

  std::vector<Marginal> marginals_;
  Dependence dependence_;
  std::vector<double> correlation_;   // d*d row-major; empty when independent
  std::vector<double> chol_;          // lower Cholesky factor of R
};

// Redraws the coordinates in a fixed subset conditionally on a row's other
// coordinates. Conditioning state is split out so one row can be conditioned
// once and then drawn from many times (the double-loop estimator).
class ConditionalSampler {
 public:
  struct Context {
    std::vector<double> conditional_mean;  // latent mean of the free block
  };

  Context condition(std::span<const double> row) const;

  // Writes fresh values into the free columns of `row`; other columns are
  // left untouched. Consumes |A| variates from the stream.
  void draw(const Context& ctx, RngStream& stream, std::span<double> row) const;

  SubsetMask mask() const { return mask_; }

 private:
  friend class InputDistribution;
  ConditionalSampler(const InputDistribution& dist, SubsetMask mask);

  const InputDistribution* dist_;
  SubsetMask mask_;
  std::vector<int> free_;        // columns being redrawn
  std::vector<int> given_;       // columns conditioned on
  std::vector<double> weights_;  // |given| x |free|: Sigma_GG^-1 Sigma_GF
  std::vector<double> chol_;     // lower Cholesky of the conditional covariance
};

}  // namespace fsens
