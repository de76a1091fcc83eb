#pragma once

namespace tempconf {

// Standard normal CDF.
double normal_cdf(double x) noexcept;

// Standard normal quantile for p in (0, 1). Acklam's rational approximation
// refined by one Halley step on erfc; absolute error below 1e-12 over
// [1e-300, 1 - 1e-16]. Returns -inf / +inf at 0 / 1 and NaN outside [0, 1].
double normal_quantile(double p) noexcept;

}  // namespace tempconf
