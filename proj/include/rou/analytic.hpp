#pragma once

#include <optional>

#include "rou/model.hpp"
#include "rou/quadrature.hpp"

namespace rou {

// Closed-form stationary quantities for the one-sided reflected OU process
// and the idle/loss rate of the process reflected on [0, d].
//
// Both one-sided cases are handled in one standardized coordinate
//   u = (x - m)/s   for a lower barrier,   u = (m - x)/s   for an upper barrier,
// with m = alpha/gamma and s = sigma/sqrt(2 gamma). In u the invariant law is a
// standard normal truncated to [u0, inf), which makes the translated
// (alpha -> alpha - gamma*l) and flipped (alpha -> gamma*d - alpha) cases the
// same computation.
//
// Small gamma is allowed, but s grows like 1/sqrt(gamma) and so does the
// truncation window of the variance quadrature.

struct AnalyticOptions {
    // Variance quadrature runs over u in [u0, max(u0, 0) + truncation_k].
    double truncation_k = 12.0;
    QuadratureOptions quadrature{1e-14, 1e-12, 4000};
};

// W(v) = exp((2 alpha v - gamma v^2) / sigma^2) and its logarithm. W peaks at
// v = alpha/gamma with log W = alpha^2/(gamma sigma^2); when that exceeds ~709
// the exponentiated value overflows and only the log is meaningful.
double log_weight_W(const OUParams& params, double v);
double weight_W(const OUParams& params, double v);

class StationaryLaw {
public:
    StationaryLaw(const OUParams& params, const BoundarySpec& boundary);

    double mean_unreflected() const noexcept { return mean_; }
    double sd_unreflected() const noexcept { return sd_; }
    const std::optional<double>& lower() const noexcept { return lower_; }
    const std::optional<double>& upper() const noexcept { return upper_; }
    double barrier() const noexcept { return lower_ ? *lower_ : *upper_; }
    bool is_upper() const noexcept { return !lower_.has_value(); }

    // Mass of N(m, s^2) on the reflection half-line; underflows to 0 once the
    // barrier sits more than ~38 s beyond the mean, use log_normalizer there.
    double normalizer() const noexcept;
    double log_normalizer() const noexcept;

    double density(double y) const;
    double log_density(double y) const;
    double cdf(double y) const;
    // Probability of lying beyond y, away from the barrier: the survival 1 - F
    // for a lower barrier, the cdf F for an upper one.
    double tail_from_barrier(double y) const;
    double boundary_density() const;
    double mean() const;

    // Standardized coordinate of y and of the barrier.
    double reduced(double y) const noexcept;
    double reduced_barrier() const noexcept { return u0_; }
    bool in_support(double y) const noexcept;

    // Inverse-cdf draw from the law given a uniform variate in (0, 1).
    double quantile_from_barrier(double p) const;

    // Closed-form h' = Mills(u)/Mills(u0). Smooth on the whole line, so it is
    // also defined (and > 1) on the far side of the barrier.
    double h_prime(double x) const;

private:
    double mean_;
    double sd_;
    std::optional<double> lower_;
    std::optional<double> upper_;
    double u0_;
    double log_mills_u0_;
};

StationaryLaw stationary_law(const OUParams& params, const BoundarySpec& boundary);

double stationary_mean(const OUParams& params, const BoundarySpec& boundary);

// (sigma^2/2) times the invariant density at the barrier.
double boundary_rate(const OUParams& params, const BoundarySpec& boundary);

// Loss rate at d of the process reflected on [0, d]:
// (sigma^2/2) W(d) / int_0^d W(v) dv.
double doubly_loss_rate(const OUParams& params, double d,
                        const QuadratureOptions& options = {1e-300, 1e-12, 4000});

// Derivative of the martingale-correcting function h, normalized by h' = 1 at
// the barrier: h'(x) = p(barrier)/p(x) * P(beyond x). Equal to
// Mills(u)/Mills(u0) in the standardized coordinate.
double h_prime(const OUParams& params, const BoundarySpec& boundary, double x);

// h(x) with h(barrier) = 0: int_l^x h' for a lower barrier, -int_x^d h' for an
// upper one.
double h_value(const OUParams& params, const BoundarySpec& boundary, double x,
               const QuadratureOptions& options = {1e-14, 1e-12, 4000});

// tau^2 = sigma^2 int h'(x)^2 p(x) dx over the support.
double asymptotic_variance(const OUParams& params, const BoundarySpec& boundary,
                           const AnalyticOptions& options = {});

struct RateAndVariance {
    double q = 0.0;
    double tau2 = 0.0;
    double boundary_density = 0.0;
};

RateAndVariance rate_and_variance(const OUParams& params, const BoundarySpec& boundary,
                                  const AnalyticOptions& options = {});

// Generator identity check with a central difference for h'':
//   (alpha - gamma x) h'(x) + (sigma^2/2) [h'(x+e) - h'(x-e)]/(2e)  -/+ q.
// The target is -q for a lower barrier and +q for an upper one, so the result
// is ~0 in both cases. h' is evaluated through its closed form, which extends
// smoothly past the barrier, so x may sit on the barrier itself.
double generator_residual(const OUParams& params, const BoundarySpec& boundary, double x,
                          double fd_step);

}  // namespace rou
