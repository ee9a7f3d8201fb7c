#include "rou/normal.hpp"

#include <cmath>
#include <limits>

namespace rou {

namespace {

// Laplace continued fraction erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz algorithm. Converges quickly for x >= 5.
double erfcx_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int j = 1; j < 5000; ++j) {
        const double a = 0.5 * j;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return 1.0 / (kSqrtPi * f);
}

}  // namespace

double erfcx(double x) {
    if (x < 0.0) {
        if (x < -26.7) return std::numeric_limits<double>::infinity();
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x < 5.0) return std::exp(x * x) * std::erfc(x);
    return erfcx_continued_fraction(x);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double log_normal_sf(double x) {
    if (x <= 0.0) return std::log(normal_sf(x));
    return -0.5 * x * x - kLogSqrt2Pi + log_mills_ratio(x);
}

double mills_ratio(double z) {
    if (z >= 0.0) return kSqrtPi / kSqrt2 * erfcx(z / kSqrt2);
    return std::exp(log_mills_ratio(z));
}

double log_mills_ratio(double z) {
    if (z >= 0.0) return std::log(kSqrtPi / kSqrt2 * erfcx(z / kSqrt2));
    // Phi(-z) sits in (1/2, 1] here, so erfc loses nothing.
    return std::log(normal_sf(z)) + 0.5 * z * z + kLogSqrt2Pi;
}

}  // namespace rou
