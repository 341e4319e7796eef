#pragma once

// Standard normal density, distribution and quantile functions.

namespace cfmm {

double normal_pdf(double x);

/// Phi(x). Backed by erfc, so the lower tail keeps full relative precision.
double normal_cdf(double x);

/// 1 - Phi(x) without cancellation.
double normal_cdf_complement(double x);

/// Phi^{-1}(p) for p in [0, 1]; returns -inf / +inf at the endpoints.
/// Acklam's rational approximation refined by one Halley step (|error| ~ 1e-15).
double normal_quantile(double p);

}  // namespace cfmm
