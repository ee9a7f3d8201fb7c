#include "rou/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "rou/error.hpp"
#include "rou/normal.hpp"

namespace rou {

namespace {

void require_one_sided(const BoundarySpec& boundary) {
    if (boundary.is_doubly()) {
        throw Error(ErrorCode::DoublyReflectedUnsupported, "boundary",
                    "invariant law is only available for one-sided reflection");
    }
}

// Breakpoints for an integrand concentrated within ~1/max(1,|u0|) of the
// barrier u0 and decaying over O(1) further out: geometrically widening
// panels from u0, then unit panels up to `end`.
std::vector<double> barrier_breaks(double u0, double end) {
    std::vector<double> breaks{u0};
    const double width = 1.0 / std::max(1.0, std::abs(u0));
    for (double step = width; u0 + step < end && step < 1.0; step *= 2.0) {
        breaks.push_back(u0 + step);
    }
    for (double b = std::floor(breaks.back()) + 1.0; b < end; b += 1.0) {
        if (b > breaks.back()) breaks.push_back(b);
    }
    breaks.push_back(end);
    return breaks;
}

}  // namespace

double log_weight_W(const OUParams& params, double v) {
    const double s2 = params.sigma() * params.sigma();
    return (2.0 * params.alpha() * v - params.gamma() * v * v) / s2;
}

double weight_W(const OUParams& params, double v) { return std::exp(log_weight_W(params, v)); }

StationaryLaw::StationaryLaw(const OUParams& params, const BoundarySpec& boundary)
    : mean_(params.mean()),
      sd_(params.sd()),
      lower_(boundary.lower()),
      upper_(boundary.upper()) {
    require_one_sided(boundary);
    u0_ = lower_ ? (*lower_ - mean_) / sd_ : (mean_ - *upper_) / sd_;
    log_mills_u0_ = log_mills_ratio(u0_);
}

double StationaryLaw::reduced(double y) const noexcept {
    return lower_ ? (y - mean_) / sd_ : (mean_ - y) / sd_;
}

bool StationaryLaw::in_support(double y) const noexcept {
    return lower_ ? y >= *lower_ : y <= *upper_;
}

double StationaryLaw::normalizer() const noexcept { return normal_sf(u0_); }

double StationaryLaw::log_normalizer() const noexcept { return log_normal_sf(u0_); }

double StationaryLaw::log_density(double y) const {
    if (!in_support(y)) return -std::numeric_limits<double>::infinity();
    const double u = reduced(y);
    return -0.5 * (u - u0_) * (u + u0_) - std::log(sd_) - log_mills_u0_;
}

double StationaryLaw::density(double y) const { return std::exp(log_density(y)); }

double StationaryLaw::tail_from_barrier(double y) const {
    if (!in_support(y)) return 1.0;
    return std::exp(log_normal_sf(reduced(y)) - log_normal_sf(u0_));
}

double StationaryLaw::cdf(double y) const {
    if (lower_) return in_support(y) ? 1.0 - tail_from_barrier(y) : 0.0;
    return in_support(y) ? tail_from_barrier(y) : 1.0;
}

double StationaryLaw::boundary_density() const { return std::exp(-std::log(sd_) - log_mills_u0_); }

double StationaryLaw::mean() const {
    const double shift = sd_ * std::exp(-log_mills_u0_);
    return lower_ ? mean_ + shift : mean_ - shift;
}

double StationaryLaw::h_prime(double x) const {
    return std::exp(log_mills_ratio(reduced(x)) - log_mills_u0_);
}

double StationaryLaw::quantile_from_barrier(double p) const {
    double u;
    const double log_mass = log_normal_sf(u0_);
    if (log_mass > -700.0) {
        // Upper-tail probability p * P(U > u0) inverted through erfc.
        const double tail = p * std::exp(log_mass);
        u = kSqrt2 * boost::math::erfc_inv(2.0 * tail);
    } else {
        // Barrier deep in the Gaussian tail: the overshoot is ~ Exp(u0).
        u = u0_ - std::log(p) / u0_;
    }
    u = std::max(u, u0_);
    const double y = lower_ ? mean_ + sd_ * u : mean_ - sd_ * u;
    return lower_ ? std::max(y, *lower_) : std::min(y, *upper_);
}

StationaryLaw stationary_law(const OUParams& params, const BoundarySpec& boundary) {
    return StationaryLaw(params, boundary);
}

double stationary_mean(const OUParams& params, const BoundarySpec& boundary) {
    return StationaryLaw(params, boundary).mean();
}

double boundary_rate(const OUParams& params, const BoundarySpec& boundary) {
    const double s = params.sigma();
    return 0.5 * s * s * StationaryLaw(params, boundary).boundary_density();
}

double doubly_loss_rate(const OUParams& params, double d, const QuadratureOptions& options) {
    if (!std::isfinite(d)) throw Error(ErrorCode::NonFiniteInput, "d", "width must be finite");
    if (!(d > 0.0)) throw Error(ErrorCode::NonPositiveWidth, "d", "interval width must be > 0");

    // W(v)/W(d) keeps the integrand O(1) near the interval end that matters.
    const double log_wd = log_weight_W(params, d);
    auto ratio = [&](double v) { return std::exp(log_weight_W(params, v) - log_wd); };

    // Panels no wider than a few unreflected standard deviations, split at the mode.
    const double sd = params.sd();
    const int pieces = static_cast<int>(std::clamp(std::ceil(d / (2.0 * sd)), 1.0, 2000.0));
    std::vector<double> breaks;
    for (int i = 0; i <= pieces; ++i) breaks.push_back(d * i / pieces);
    const double mode = params.mean();
    if (mode > 0.0 && mode < d) {
        breaks.push_back(mode);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    }
    const double integral = integrate_piecewise(ratio, breaks, options).value;
    const double s = params.sigma();
    return 0.5 * s * s / integral;
}

double h_prime(const OUParams& params, const BoundarySpec& boundary, double x) {
    const StationaryLaw law(params, boundary);
    if (!law.in_support(x)) throw Error(ErrorCode::OutOfSupport, "x", "outside the reflection half-line");
    return law.h_prime(x);
}

double h_value(const OUParams& params, const BoundarySpec& boundary, double x,
               const QuadratureOptions& options) {
    const StationaryLaw law(params, boundary);
    if (!law.in_support(x)) throw Error(ErrorCode::OutOfSupport, "x", "outside the reflection half-line");
    if (x == law.barrier()) return 0.0;

    // Integrate in the standardized coordinate: dx = s du (lower) or -s du (upper).
    const double u0 = law.reduced_barrier();
    const double u_end = law.reduced(x);
    auto integrand = [&](double u) { return std::exp(log_mills_ratio(u) - log_mills_ratio(u0)); };
    std::vector<double> breaks = barrier_breaks(u0, u_end);
    const double integral = law.sd_unreflected() * integrate_piecewise(integrand, breaks, options).value;
    return law.is_upper() ? -integral : integral;
}

double asymptotic_variance(const OUParams& params, const BoundarySpec& boundary,
                           const AnalyticOptions& options) {
    const StationaryLaw law(params, boundary);
    const double u0 = law.reduced_barrier();
    const double lm0 = log_mills_ratio(u0);
    // h'(u)^2 * phi(u) / P(U > u0), all in logs.
    auto integrand = [&](double u) {
        return std::exp(2.0 * log_mills_ratio(u) - 3.0 * lm0 - 0.5 * (u - u0) * (u + u0));
    };
    const double end = std::max(u0, 0.0) + options.truncation_k;
    const double integral =
        integrate_piecewise(integrand, barrier_breaks(u0, end), options.quadrature).value;
    return params.sigma() * params.sigma() * integral;
}

RateAndVariance rate_and_variance(const OUParams& params, const BoundarySpec& boundary,
                                  const AnalyticOptions& options) {
    const StationaryLaw law(params, boundary);
    const double s = params.sigma();
    RateAndVariance out;
    out.boundary_density = law.boundary_density();
    out.q = 0.5 * s * s * out.boundary_density;
    out.tau2 = asymptotic_variance(params, boundary, options);
    return out;
}

double generator_residual(const OUParams& params, const BoundarySpec& boundary, double x,
                          double fd_step) {
    const StationaryLaw law(params, boundary);
    if (!law.in_support(x)) throw Error(ErrorCode::OutOfSupport, "x", "outside the reflection half-line");
    if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidConfig, "fd_step", "must be > 0");
    const double s = params.sigma();
    const double q = 0.5 * s * s * law.boundary_density();
    const double h1 = law.h_prime(x);
    const double h2 = (law.h_prime(x + fd_step) - law.h_prime(x - fd_step)) / (2.0 * fd_step);
    const double lh = (params.alpha() - params.gamma() * x) * h1 + 0.5 * s * s * h2;
    return law.is_upper() ? lh - q : lh + q;
}

}  // namespace rou
