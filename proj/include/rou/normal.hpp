#pragma once

// Standard normal helpers. The tail quantities go through the scaled
// complementary error function so that ratios of two Gaussian tails never
// form 0/0.

namespace rou {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// exp(x^2) erfc(x). Overflows to +inf for x below about -26.6.
double erfcx(double x);

double normal_pdf(double x);
double normal_cdf(double x);
// 1 - Phi(x), without cancellation for large x.
double normal_sf(double x);
double log_normal_sf(double x);

// (1 - Phi(z)) / phi(z). Finite for z > -37.5; +inf below.
double mills_ratio(double z);
// log of the Mills ratio, finite for every finite z.
double log_mills_ratio(double z);

}  // namespace rou
