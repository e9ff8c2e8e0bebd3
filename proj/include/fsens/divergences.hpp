#pragma once

#include <span>
#include <string>

namespace fsens {

enum class DivergenceKind { squared_half, absolute };

// Bivariate divergence: nonnegative and zero exactly on the diagonal. Its
// expectation over pick-freeze output pairs defines the sensitivity map.
struct Divergence {
  DivergenceKind kind = DivergenceKind::squared_half;

  static Divergence squared_half() { return {DivergenceKind::squared_half}; }
  static Divergence absolute() { return {DivergenceKind::absolute}; }

  // Throws on non-finite arguments.
  double operator()(double x, double y) const;
  std::string name() const;
};

enum class ContrastKind { mean, median, quantile };

// Loss whose empirical minimizer is a summary statistic: mean for (y-t)^2,
// median for |y-t|, the alpha-quantile for the pinball loss.
struct Contrast {
  ContrastKind kind = ContrastKind::mean;
  double alpha = 0.5;  // quantile level; only meaningful for the quantile kind

  static Contrast mean() { return {ContrastKind::mean, 0.5}; }
  static Contrast median() { return {ContrastKind::median, 0.5}; }
  static Contrast quantile(double alpha);

  double loss(double y, double theta) const;
  std::string name() const;
};

// Minimizer of the empirical contrast over a nonempty sample. Conventions
// are deterministic so estimates reproduce bit-for-bit:
//  - mean kind: the sample mean;
//  - median kind: the lower median, order statistic ceil(n/2) (1-based);
//  - quantile kind: order statistic ceil(alpha*n) (1-based), the
//    left-continuous inverse empirical CDF.
double empirical_minimizer(const Contrast& contrast,
                           std::span<const double> sample);

// (1/n) * sum_i loss(y_i, theta).
double empirical_contrast_value(const Contrast& contrast,
                                std::span<const double> sample, double theta);

}  // namespace fsens
