#pragma once

namespace fsens {

// Standard normal CDF.
double normal_cdf(double z);

// Standard normal quantile for p in (0,1). Rational initial guess refined by
// one Halley step; accurate to a few ulps across the full range.
double inverse_normal_cdf(double p);

}  // namespace fsens
