#pragma once

namespace streamreg {

/// Standard normal CDF, via erfc for accuracy in both tails.
double normal_cdf(double z);

/// Quantile of the standard normal. Acklam's rational approximation followed by
/// one Halley step against normal_cdf; |normal_cdf(result) - p| < 1e-9 over (0,1).
/// Throws std::domain_error unless 0 < p < 1.
double inverse_normal_cdf(double p);

} // namespace streamreg
