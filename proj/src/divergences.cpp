#include "fsens/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fsens {

double Divergence::operator()(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw std::domain_error("divergence: non-finite argument");
  switch (kind) {
    case DivergenceKind::squared_half:
      return 0.5 * (x - y) * (x - y);
    case DivergenceKind::absolute:
      return std::fabs(x - y);
  }
  return 0.0;
}

std::string Divergence::name() const {
  return kind == DivergenceKind::squared_half ? "squared_half" : "absolute";
}

Contrast Contrast::quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("quantile contrast: alpha must lie in (0,1)");
  return {ContrastKind::quantile, alpha};
}

double Contrast::loss(double y, double theta) const {
  switch (kind) {
    case ContrastKind::mean:
      return (y - theta) * (y - theta);
    case ContrastKind::median:
      return std::fabs(y - theta);
    case ContrastKind::quantile:
      return (y - theta) * (alpha - (y <= theta ? 1.0 : 0.0));
  }
  return 0.0;
}

std::string Contrast::name() const {
  switch (kind) {
    case ContrastKind::mean:
      return "mean";
    case ContrastKind::median:
      return "median";
    case ContrastKind::quantile:
      return "quantile(" + std::to_string(alpha) + ")";
  }
  return "";
}

double empirical_minimizer(const Contrast& contrast,
                           std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n == 0)
    throw std::invalid_argument("empirical_minimizer: empty sample");

  if (contrast.kind == ContrastKind::mean) {
    double sum = 0.0;
    for (double y : sample) sum += y;
    return sum / static_cast<double>(n);
  }

  // Order-statistic index, 1-based; lower median coincides with alpha = 1/2.
  std::size_t index;
  if (contrast.kind == ContrastKind::median) {
    index = (n + 1) / 2;
  } else {
    index = static_cast<std::size_t>(
        std::ceil(contrast.alpha * static_cast<double>(n)));
    index = std::clamp<std::size_t>(index, 1, n);
  }
  std::vector<double> scratch(sample.begin(), sample.end());
  std::nth_element(scratch.begin(), scratch.begin() + (index - 1),
                   scratch.end());
  return scratch[index - 1];
}

double empirical_contrast_value(const Contrast& contrast,
                                std::span<const double> sample, double theta) {
  const std::size_t n = sample.size();
  if (n == 0)
    throw std::invalid_argument("empirical_contrast_value: empty sample");
  double sum = 0.0;
  for (double y : sample) sum += contrast.loss(y, theta);
  return sum / static_cast<double>(n);
}

}  // namespace fsens
